# factperm: finite-category constructions for permutative categories and Segal functors
