"""Fixed-memory Pauli-basis decomposition of dense complex matrices."""
from .core import (
    BETA,
    MAX_QUBITS,
    BetaTable,
    GrayCodeWalker,
    PauliOp,
    PauliString,
    PhaseFactor,
    flipped_bit_index,
    gray_code,
    index_to_string,
    pauli_digit,
    string_to_index,
    xy_mask,
)
from .decompose import (
    DenseMatrix,
    MultiplicationCounter,
    PauliDecomposition,
    coeff_fast,
    coeff_slow,
    decompose,
    decompose_parallel,
    decompose_serial_quaternary,
    decompose_slow,
    oracle_coeff_kron,
    recompose,
)

__version__ = "0.1.0"
