const frame = document.getElementById("f").contentWindow;
frame.postMessage(payload, "https://a.com");
