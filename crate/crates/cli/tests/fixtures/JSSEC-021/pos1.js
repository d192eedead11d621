fetch("http://api.example.com/x"); // @expect JSSEC-021
