const passwordField = "pw-input";
let password = "";
const keyCode = 13;
bind(passwordField, password, keyCode);
