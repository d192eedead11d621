Object.prototype.toString = render; // @expect JSSEC-019
