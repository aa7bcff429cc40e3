int cavmet_placeholder_test_dynamics = 0;
