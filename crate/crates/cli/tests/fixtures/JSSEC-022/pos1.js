console.log("pw:", password); // @expect JSSEC-013 // @expect JSSEC-022
