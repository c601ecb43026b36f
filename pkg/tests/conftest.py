import sys

# Deep quantifier chains from the baseline rewrite stay within iterative
# code paths, but boolean matrices can still nest a few thousand levels on
# adversarial inputs.
sys.setrecursionlimit(20_000)
