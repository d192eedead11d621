app.get("/login", function (req, res) {
  res.cookie("sid", token, { secure: true, httpOnly: true });
  res.end();
});
