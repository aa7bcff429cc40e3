int cavmet_placeholder_test_protocol = 0;
