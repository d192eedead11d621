app.post("/upload", function (req, res) {
  const file = req.file;
  fs.rename(file.path, "/srv/uploads/" + file.originalname, done); // @expect JSSEC-023
  res.end();
});
