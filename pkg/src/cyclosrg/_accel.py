"""Optional numba acceleration.

Set ``CYCLOSRG_KERNELS=numpy`` to force the pure-numpy code paths even when
numba is installed.  numba itself is imported on the first call of a
compiled kernel, so short runs that stay on the numpy paths never pay for it.
"""
import importlib.util
import types
import os

_requested = os.environ.get("CYCLOSRG_KERNELS", "numba").strip().lower()

HAVE_NUMBA = _requested != "numpy" and importlib.util.find_spec("numba") is not None


class _Lazy:
    def __init__(self, fn, options):
        self.py_func = fn
        self._options = options
        self._compiled = None
        self.__name__ = fn.__name__
        self.__doc__ = fn.__doc__

    def dispatcher(self):
        if self._compiled is None:
            if not HAVE_NUMBA:
                raise RuntimeError("numba kernels are disabled or numba is not installed")
            import numba
            fn = self.py_func
            # kernels calling other kernels must see numba dispatchers, not wrappers
            callees = {name: obj.dispatcher() for name in fn.__code__.co_names
                       if isinstance(obj := fn.__globals__.get(name), _Lazy)}
            if callees:
                fn = types.FunctionType(fn.__code__, {**fn.__globals__, **callees},
                                        fn.__name__, fn.__defaults__, fn.__closure__)
            self._compiled = numba.njit(**self._options)(fn)
        return self._compiled

    def __call__(self, *args):
        return self.dispatcher()(*args)


def njit(*args, **kwargs):
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return _Lazy(args[0], {})
    return lambda fn: _Lazy(fn, kwargs)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
