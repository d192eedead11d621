if (false) { secretPath(); } // @expect JSSEC-005
function orphan() { // @expect JSSEC-005
  return 1;
}
