location.href = "javascript:alert(1)"; // @expect JSSEC-015
location.assign("//evil.example.com"); // @expect JSSEC-015
