function tick() {
  return Date.now();
}
setTimeout(tick, 100);
