from hamendo.verifiers.hamming.verify import HammingVerifier, DistanceRangeVerifier
from hamendo.verifiers.categorical.verify import CategoricalProductVerifier
from hamendo.verifiers.complement.verify import (
    ComplementHammingVerifier,
    ComplementCategoricalVerifier,
)
from hamendo.verifiers.cuboid.verify import CuboidVerifier
