var obj = eval("(" + json_string + ")"); // @expect JSSEC-009 // @expect JSSEC-016
use(obj);
