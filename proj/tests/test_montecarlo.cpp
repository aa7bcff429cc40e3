int cavmet_placeholder_test_montecarlo = 0;
