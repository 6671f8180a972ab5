"""fraq - fast convolution quadrature for Riemann-Liouville derivatives."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("fraq")
except PackageNotFoundError:
    # source checkout that was never installed
    __version__ = "0+dev"
