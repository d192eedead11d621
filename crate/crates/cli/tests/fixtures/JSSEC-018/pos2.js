class K0 {}
class K1 extends K0 {}
class K2 extends K1 {}
class K3 extends K2 {}
class K4 extends K3 {}
class K5 extends K4 {}
class K6 extends K5 {}
class K7 extends K6 {}
class K8 extends K7 {} // @expect JSSEC-018
