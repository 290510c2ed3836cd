"""Integer codes for the primitive norm kernels.

The compiled extension (`_core.pyx`) hardcodes the same literals; keep the
two files in sync if a code is ever added.
"""

C0 = 0      # sup of absolute values
ELL1 = 1    # sum of absolute values
ELLP = 2    # (sum |x|^p)^(1/p), p > 1
LIN = 3     # sup_k w_k * sum_{n>=k} |x_n|, w_k = 8^k/(1+8^k)
JAMES = 4   # p-variation over increasing subsequences, zero-extended
