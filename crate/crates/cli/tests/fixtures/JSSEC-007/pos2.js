function init() {
  counter = 1; // @expect JSSEC-007
}
init();
