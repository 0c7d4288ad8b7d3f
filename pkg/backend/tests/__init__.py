# Tests for the non-commutative worlds engine
