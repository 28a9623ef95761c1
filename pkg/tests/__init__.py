# Tests for the lampair package
