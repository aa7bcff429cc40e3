int cavmet_placeholder_test_fisher = 0;
