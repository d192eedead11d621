app.get("/a", function (req, res) {
  try {
    work();
  } catch (e) {
    res.status(500).send("internal error");
  }
});
