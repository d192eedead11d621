document.cookie = "sid=" + t; // @expect JSSEC-017
