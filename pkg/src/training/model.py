"""The trainable PQCNN model."""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import torch
from torch import nn

from src.config.experiment import ArchitectureConfig
from src.errors import ConfigError, DimensionError, ParameterError, SimulationError
from src.fock.states import tensor_basis_indices
from src.layers.convolution import conv_circuit, conv_layer, filter_params
from src.layers.dense import dense_layer, embedding_indices, measure_distribution, padding_offset
from src.layers.loader import RegisterLayout, encode_batch, loader_circuit, qdl_encode
from src.layers.pooling import PoolingSpec, pooling_channel, pooling_kraus
from src.layers.readout import ReadoutBinning, bin_probabilities, readout
from src.optics.circuit import Circuit, compact_six_mode_mesh, compose_matrix, mesh_universal, with_random_phases
from src.optics.lift import lift_block


@dataclass(frozen=True)
class ParamAccounting:
    conv: int
    dense: int

    @property
    def total(self) -> int:
        return self.conv + self.dense

    def to_dict(self) -> Dict[str, int]:
        return {"conv": self.conv, "dense": self.dense, "total": self.total}


@dataclass(frozen=True)
class LayerResources:
    layer: str
    modes: int
    photons: int
    beam_splitters: int
    depth: int


@dataclass(frozen=True)
class ResourceAccounting:
    """Modes, photons and beam splitters each layer needs on hardware."""

    layers: Tuple[LayerResources, ...]
    injected_photons: int

    @property
    def beam_splitters(self) -> int:
        return sum(layer.beam_splitters for layer in self.layers)

    @property
    def depth(self) -> int:
        return sum(layer.depth for layer in self.layers)

    def layer(self, name: str) -> LayerResources:
        return next(layer for layer in self.layers if layer.layer == name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "layers": [asdict(layer) for layer in self.layers],
            "injected_photons": self.injected_photons,
            "beam_splitters": self.beam_splitters,
            "depth": self.depth,
        }


class PQCNNModel(nn.Module):
    """
    Loader, tied convolution, state-injection pooling, dense layer and readout.

    All trainable angles live in one flat ``params`` vector: the convolution
    slots first (register-major), then the dense slots.
    """

    def __init__(
        self,
        layout: RegisterLayout,
        kernel_size: int,
        dense: Circuit,
        alpha: int,
        readout_binning: Optional[ReadoutBinning] = None,
        pooling: Optional[PoolingSpec] = None,
        params: Optional[Sequence[float]] = None,
        nearest_rank1: bool = False,
    ):
        super().__init__()
        self.layout = layout
        self.kernel_size = kernel_size
        self.conv = conv_circuit(layout, kernel_size)
        self.pooling = pooling if pooling is not None else PoolingSpec.halving(layout)
        if self.pooling.layout != layout:
            raise DimensionError("Pooling spec was built for another layout")
        self.pooled_layout = self.pooling.output_layout
        if dense.m != self.pooled_layout.m + alpha:
            raise DimensionError(
                f"Dense circuit spans {dense.m} modes; pooled layout has {self.pooled_layout.m} plus alpha={alpha}"
            )
        self.dense = dense
        self.alpha = alpha
        self.nearest_rank1 = nearest_rank1
        self.readout_binning = readout_binning or ReadoutBinning.canonical(dense.m, layout.k)
        if (self.readout_binning.m, self.readout_binning.k) != (dense.m, layout.k):
            raise DimensionError("Readout binning does not match the dense output basis")

        n_params = self.conv.n_params + self.dense.n_params
        initial = torch.zeros(n_params, dtype=torch.float64)
        if params is not None:
            initial = torch.as_tensor(np.asarray(params, dtype=np.float64))
            if initial.shape != (n_params,):
                raise ParameterError(f"Model needs {n_params} parameters, got {tuple(initial.shape)}")
        self.params = nn.Parameter(initial.clone())

        k = layout.k
        self._input_indices = tensor_basis_indices(layout.basis(), layout.sizes)
        _, self._kraus = pooling_kraus(self.pooling)
        pooled_indices = tensor_basis_indices(self.pooled_layout.basis(), self.pooled_layout.sizes)
        padding = embedding_indices(self.pooled_layout.m, k, dense.m, padding_offset(alpha))
        self._dense_columns = padding[pooled_indices]
        self._readout_matrix = self.readout_binning.matrix()

    # Parameters

    @property
    def n_params(self) -> int:
        return self.params.numel()

    def param_accounting(self) -> ParamAccounting:
        return ParamAccounting(conv=self.conv.n_params, dense=self.dense.n_params)

    def resource_accounting(self) -> ResourceAccounting:
        """
        Per-layer hardware resources.

        Pooling needs one extra photon per pooled register, held ready for
        injection; the dense layer spans the surviving modes plus ``alpha``.
        """
        m, k = self.layout.m, self.layout.k
        injected = sum(1 for measured in self.pooling.measured if measured)
        loader = Circuit(
            m,
            tuple(
                gate
                for offset, d in zip(self.layout.offsets, self.layout.sizes)
                for gate in loader_circuit(np.zeros(d - 1), m, offset).gates
            ),
        )
        layers = (
            LayerResources("qdl", m, k, len(loader), loader.depth),
            LayerResources("conv", m, k, len(self.conv), self.conv.depth),
            LayerResources("pooling", m, k + injected, 0, 0),
            LayerResources("dense", self.dense.m, k, len(self.dense), self.dense.depth),
        )
        return ResourceAccounting(layers, injected)

    @property
    def conv_params(self) -> torch.Tensor:
        return self.params[: self.conv.n_params]

    @property
    def dense_params(self) -> torch.Tensor:
        return self.params[self.conv.n_params:]

    def set_parameters(self, values: Sequence[float]) -> None:
        values = torch.as_tensor(np.asarray(values, dtype=np.float64))
        if values.shape != self.params.shape:
            raise ParameterError(f"Model needs {self.n_params} parameters, got {tuple(values.shape)}")
        with torch.no_grad():
            self.params.copy_(values)

    # Batched path

    def encode(self, images) -> torch.Tensor:
        """Tensor coefficients of every image, shape ``(N, prod(sizes))``."""
        return encode_batch(images, self.layout, self.nearest_rank1)

    def conv_block(self) -> torch.Tensor:
        """Lifted filter restricted to the one-photon-per-register states."""
        unitary = compose_matrix(self.conv, self.conv_params)
        return lift_block(unitary, self.layout.k, rows=self._input_indices, cols=self._input_indices)

    def dense_distribution(self, coefficients: torch.Tensor) -> torch.Tensor:
        """Output photon-counting distributions, shape ``(N, D_dense)``."""
        filtered = coefficients @ self.conv_block().T
        branches = torch.einsum("bot,nt->nbo", self._kraus, filtered)
        unitary = compose_matrix(self.dense, self.dense_params)
        columns = lift_block(unitary, self.layout.k, cols=self._dense_columns)
        amplitudes = torch.einsum("do,nbo->nbd", columns, branches)
        return (amplitudes.real.pow(2) + amplitudes.imag.pow(2)).sum(dim=1)

    def forward(self, coefficients: torch.Tensor) -> torch.Tensor:
        """Class probabilities, shape ``(N, 2)``."""
        return bin_probabilities(self.dense_distribution(coefficients), self._readout_matrix)

    # Layer-by-layer path

    def stages(self, image) -> Dict[str, Any]:
        """State after every stage for a single image."""
        loaded = qdl_encode(image, self.layout, self.nearest_rank1)
        filtered = conv_layer(loaded, self.kernel_size, self.conv_params, self.layout)
        pooled = pooling_channel(filtered, self.pooling)
        dense = dense_layer(pooled, self.dense, self.dense_params, self.alpha)
        dist = measure_distribution(dense)
        return {
            "qdl": loaded,
            "conv": filtered,
            "pooling": pooled,
            "dense": dense,
            "readout": readout(dist, self.readout_binning),
        }

    # Serialization

    def to_dict(self) -> Dict[str, Any]:
        return {
            "registers": list(self.layout.sizes),
            "kernel_size": self.kernel_size,
            "alpha": self.alpha,
            "pooled_registers": [r for r, measured in enumerate(self.pooling.measured) if measured],
            "dense": self.dense.to_dict(),
            "readout": self.readout_binning.to_dict(),
            "nearest_rank1": self.nearest_rank1,
            "params": [float(x) for x in self.params.detach()],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PQCNNModel":
        try:
            layout = RegisterLayout(tuple(data["registers"]))
            pooling = PoolingSpec.halving(layout, data.get("pooled_registers"))
            return cls(
                layout,
                int(data["kernel_size"]),
                Circuit.from_dict(data["dense"]),
                int(data["alpha"]),
                ReadoutBinning.from_dict(data["readout"]),
                pooling,
                data["params"],
                bool(data.get("nearest_rank1", False)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Model file does not describe a valid model: {e}") from e


def forward(model: PQCNNModel, image) -> torch.Tensor:
    """Class probability pair of one image through the layer-by-layer pipeline."""
    return model.stages(image)["readout"]


def uniform_angles(count: int, generator: torch.Generator, low: float = 0.0, high: float = np.pi / 2) -> torch.Tensor:
    """``count`` angles drawn uniformly from ``[low, high)``."""
    return torch.rand(count, generator=generator, dtype=torch.float64) * (high - low) + low


def dense_circuit(arch: ArchitectureConfig) -> Circuit:
    """Dense mesh of an architecture, without phases."""
    pooled_modes = sum(d // 2 for d in arch.registers)
    m = pooled_modes + arch.alpha
    if arch.dense_mesh == "compact":
        if m != 6:
            raise ConfigError(f"The compact dense mesh spans 6 modes, the architecture needs {m}")
        return compact_six_mode_mesh()
    return mesh_universal(m)


def build_model(arch: ArchitectureConfig, seed: Optional[int] = None) -> PQCNNModel:
    """
    Model of an architecture.

    With a ``seed`` the trainable angles are drawn first from a generator
    seeded with it; random dense phases, when enabled, come next from the same
    stream and stay frozen.
    """
    try:
        layout = RegisterLayout(tuple(arch.registers))
        dense = dense_circuit(arch)
        params = None
        if seed is not None:
            generator = torch.Generator().manual_seed(seed)
            count = layout.k * filter_params(arch.kernel_size) + dense.n_params
            params = uniform_angles(count, generator, arch.init_low, arch.init_high).numpy()
            if arch.dense_random_phases:
                dense = with_random_phases(dense, generator)
        binning = ReadoutBinning.default(arch.readout, dense.m, layout.k)
        return PQCNNModel(
            layout, arch.kernel_size, dense, arch.alpha, binning, params=params, nearest_rank1=arch.nearest_rank1
        )
    except SimulationError as e:
        raise ConfigError(f"Inconsistent architecture: {e}") from e


def architecture_accounting(arch: ArchitectureConfig) -> ParamAccounting:
    """Conv/dense split of the trainable angles of an architecture."""
    return build_model(arch).param_accounting()


def architecture_resources(arch: ArchitectureConfig) -> ResourceAccounting:
    """Modes, photons and beam splitters per layer of an architecture."""
    return build_model(arch).resource_accounting()
