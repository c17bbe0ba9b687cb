# Test suite for the sullivan package
