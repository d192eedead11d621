load(function () {
  parse(function () {
    check(function () {
      save(function () { // @expect JSSEC-006
        done();
      });
    });
  });
});
