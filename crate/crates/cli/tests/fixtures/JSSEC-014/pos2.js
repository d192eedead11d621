document.write(banner); // @expect JSSEC-014
