switch (a) { // @expect JSSEC-010
  case 1:
    switch (b) { // @expect JSSEC-010
      case 2:
        go();
        break;
    }
    break;
}
