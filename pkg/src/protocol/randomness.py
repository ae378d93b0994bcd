"""
Flujos de aleatoriedad sembrados y separables por etiqueta
"""

from enum import IntEnum
from typing import List, Optional, Tuple

import numpy as np


class Stream(IntEnum):
    """Consumidores de aleatoriedad; cada uno tiene su propio flujo"""
    DATABASE = 1
    STORAGE = 2
    DEALER = 3
    QUERY = 4
    ADVERSARY = 5
    AUDIT = 6


class RandomSource:
    """
    Fuente reproducible: la semilla y las etiquetas (flujo, *indices)
    determinan por completo cada generador, asi que agregar un consumidor
    nunca altera los valores de otro.
    """

    def __init__(self, seed: Optional[int] = None):
        # Sin semilla se toma entropia del sistema y se registra para reproducir
        self.seed = int(np.random.SeedSequence().entropy) if seed is None else int(seed)

    def generator(self, stream: Stream, *labels: int) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(int(stream), *map(int, labels)))
        return np.random.default_rng(sequence)

    def field_elements(self, q: int, size, stream: Stream, *labels: int) -> List:
        """Elementos uniformes de F_q como ints de Python (size puede ser una forma)"""
        return self.generator(stream, *labels).integers(0, q, size=size).tolist()

    def child(self, *labels: int) -> "RandomSource":
        """Fuente independiente derivada, p.ej. una por ensayo de auditoria"""
        words: Tuple[int, ...] = tuple(
            np.random.SeedSequence(self.seed, spawn_key=(int(Stream.AUDIT), *map(int, labels)))
            .generate_state(2, dtype=np.uint64)
            .tolist()
        )
        return RandomSource((words[0] << 64) | words[1])
