// Client-side corpus for engine tests.
var settings = {
  a: 1, b: 2, c: 3, d: 4, e: 5, f: 6, g: 7, h: 8, i: 9, j: 10, k: 11,
  l: 12, m: 13, n: 14, o: 15, p: 16, q: 17, r: 18, s: 19, t: 20, u: 21
};
var apiKey = "sk_live_0123456789";
var hash = location.hash.substring(1);

function render(target) {
  target.innerHTML = hash;
  document.write("<p>" + hash + "</p>");
}

function configure(a, b, c, d, e, f) {
  return a + b + c + d + e + f;
}

function later() {
  return 1;
  render(null);
}

function load(cb) {
  step(function () {
    step(function () {
      step(function () {
        step(function () {
          cb();
        });
      });
    });
  });
}

function pick(x) {
  switch (x) {
    case 1:
      return "one";
  }
  try {
    JSON.parse(x);
  } catch (e) {}
}

counter = 0;
eval("run(" + hash + ")");
eval(hash); // jssec-disable-line JSSEC-009 reason: covered by the line above
var body = '{"user": "' + hash + '"}';
console.log("token", apiKey);
debugger;
document.cookie = "sid=" + hash;
frames[0].postMessage(body, "*");
window.addEventListener("message", function (event) {
  render(event.data);
});
location.href = new URLSearchParams(location.search).get("next");
Object.prototype.polluted = true;
crypto.subtle.digest("SHA-1", data);
fetch("http://api.example.com/items");
