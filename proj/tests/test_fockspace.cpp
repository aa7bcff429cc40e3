int cavmet_placeholder_test_fockspace = 0;
