app.get("/b", function (req, res) {
  try {
    work();
  } catch (err) {
    audit(err);
    res.status(500).json({ error: "internal" });
  }
});
