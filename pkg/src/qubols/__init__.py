from qubols.lib.local_search import RunConfig, run
from qubols.metadata import __version__

__all__ = ["RunConfig", "__version__", "run"]
