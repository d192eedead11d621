try {
  run();
} catch (e) {} // @expect JSSEC-004
