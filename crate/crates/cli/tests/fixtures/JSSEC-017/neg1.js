document.cookie = "sid=" + t + "; Secure; SameSite=Strict";
