app.post("/log", function (req, res) {
  fs.writeFile("/tmp/fixed.log", "entry", done);
  res.end();
});
