const build = (a, { b, c }, d, e, f, ...rest) => [a, b, c, d, e, f, rest]; // @expect JSSEC-003
build(1, {}, 2, 3, 4);
