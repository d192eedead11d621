const frame = document.getElementById("f").contentWindow;
frame.postMessage(payload, "*"); // @expect JSSEC-012
