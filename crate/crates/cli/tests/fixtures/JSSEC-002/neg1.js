function tally(step) {
  let total = 0;
  total += step(0);
  total += step(1);
  total += step(2);
  total += step(3);
  total += step(4);
  total += step(5);
  total += step(6);
  total += step(7);
  return total;
}
tally(Math.abs);
