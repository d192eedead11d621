function connect(host, port, user, pass, db, timeout) { // @expect JSSEC-003
  return [host, port, user, pass, db, timeout].join(":");
}
connect("h", 1, "u", "p", "d", 5);
