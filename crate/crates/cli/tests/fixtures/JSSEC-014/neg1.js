const el = document.getElementById("out");
el.innerHTML = "<b>hi</b>";
