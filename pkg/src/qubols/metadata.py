from importlib.metadata import PackageNotFoundError
from importlib.metadata import metadata as md

dist_name = __name__.split(".", maxsplit=1)[0]
try:
    __version__ = md(dist_name)["Version"]
except PackageNotFoundError:
    __version__ = "0.0.0+unknown"
