load(function () {
  parse(function () {
    done();
  });
});
