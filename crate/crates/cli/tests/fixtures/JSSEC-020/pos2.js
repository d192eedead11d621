const cipher = crypto.createCipheriv("des", secretBytes, iv); // @expect JSSEC-020
const h = crypto.createHash("SHA-1"); // @expect JSSEC-020
use(cipher, h);
