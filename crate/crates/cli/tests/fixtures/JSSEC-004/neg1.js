try {
  run();
} catch (e) {
  report(e);
}
