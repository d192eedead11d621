const id = new Function("a", "return a"); // @expect JSSEC-009
setTimeout("tick()", 100); // @expect JSSEC-009
id(1);
