const el = document.getElementById("out");
el.innerHTML = location.hash; // @expect JSSEC-014
