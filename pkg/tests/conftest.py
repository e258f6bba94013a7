# One global seed for every Monte Carlo test.  The value is arbitrary but
# fixed; each test picks its own stream id so draws never collide, and all
# assertions are deterministic given the pair.
SEED = 20260809
