function five(a, b, c, d, e) {
  return a + b + c + d + e;
}
five(1, 2, 3, 4, 5);
