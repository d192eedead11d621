function C0() {}
function C1() {}
C1.prototype = Object.create(C0.prototype);
function C2() {}
C2.prototype = Object.create(C1.prototype);
function C3() {}
C3.prototype = Object.create(C2.prototype);
function C4() {}
C4.prototype = Object.create(C3.prototype);
function C5() {}
C5.prototype = Object.create(C4.prototype);
function C6() {}
C6.prototype = Object.create(C5.prototype);
function C7() {}
C7.prototype = Object.create(C6.prototype);
function C8() {}
C8.prototype = Object.create(C7.prototype); // @expect JSSEC-018
