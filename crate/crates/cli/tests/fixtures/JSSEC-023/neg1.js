app.post("/upload/:name", function (req, res) {
  fs.writeFile(dir + sanitizeName(req.params.name), req.body, done);
  res.end();
});
