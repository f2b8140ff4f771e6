"""Exact and asymptotic counting of friable integers and squarefree-kernel
thresholds.

The compiled extension carries all the machinery; this package just re-exports
it.  Typical use::

    import friable

    rt = friable.build_rho_table(30.0)
    friable.rho(rt, 2.0)                      # 0.30685...

    ft = friable.build_tables(10**6)
    friable.psi_exact(ft, 10**6, 100)         # exact friable count
    friable.d_estimate(rt, 10**6, 2.5).value  # two-term asymptotic
"""

try:
    from ._core import *          # noqa: F401,F403  (installed layout)
    from ._core import __doc__ as _core_doc  # noqa: F401
except ImportError:  # build-tree layout: _core sits next to the package dir
    from _core import *           # noqa: F401,F403
    from _core import __doc__ as _core_doc  # noqa: F401

__version__ = "1.0.0"
