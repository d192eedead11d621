// Server-side corpus for engine tests.
const crypto = require("crypto");
const fs = require("fs");

function digest(text) {
  return crypto.createHash("md5").update(text).digest("hex");
}

app.post("/upload", function (req, res) {
  fs.writeFile("uploads/" + req.params.name, req.body, function () {});
  res.cookie("session", req.body.id);
  console.info("password", req.body.password);
});

app.get("/fail", function (req, res) {
  try {
    run(req.query.q);
  } catch (err) {
    res.status(500).send(err.stack);
  }
});

app.get("/go", function (req, res) {
  res.redirect(req.query.next);
});

function merge(dst, src) {
  for (var key in src) {
    dst[key] = src[key];
  }
  return dst;
}

app.post("/merge", function (req, res) {
  merge({}, JSON.parse(req.body.raw));
  res.json({ ok: true });
});
