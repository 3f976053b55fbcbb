from abc import ABC, abstractmethod

from .models import ProcessingResult
from .tiling import TilingGraph


class GraphRepository(ABC):
    """Abstract repository for generated tilings"""

    @abstractmethod
    def save_graph(self, graph: TilingGraph, destination: str) -> ProcessingResult:
        """Persist a tiling

        Args:
            graph: Generated tiling
            destination: Storage location relative to the repository root

        Returns:
            ProcessingResult with save operation outcome
        """
        pass

    @abstractmethod
    def load_graph(self, source: str) -> TilingGraph:
        """Load a previously saved tiling

        Args:
            source: Storage location relative to the repository root

        Returns:
            TilingGraph rebuilt from storage

        Raises:
            FileNotFoundError: If nothing is stored at source
        """
        pass
