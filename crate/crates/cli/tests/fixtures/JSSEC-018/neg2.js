class A {}
class B extends A {}
new B();
