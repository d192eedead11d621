switch (a) {
  case 1:
    switch (b) {
      default:
        go();
    }
    break;
  default:
    break;
}
