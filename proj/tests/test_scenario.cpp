int cavmet_placeholder_test_scenario = 0;
