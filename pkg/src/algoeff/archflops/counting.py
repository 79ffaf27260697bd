"""Analytic operation counts for a layer graph.

Counts are exact integers derived from shapes, never measured. The base
unit is the multiply-accumulate (mac): one multiply plus one add counts
as a single operation. The ``flop2`` unit counts the same work as two
operations per mac.

Per-layer mac rules, given input channels ic and output shape oc x oh x ow:

    conv2d           oc * oh * ow * (ic / groups) * kernel_h * kernel_w
    linear           in_features * out_features   (in_features = ic*ih*iw)
    squeeze_excite   ic * squeeze + squeeze * ic, squeeze = max(1, ic // reduction)
    maxpool/avgpool  oc * oh * ow * kernel * kernel
    global_avgpool   ic * ih * iw
    batchnorm        ic * ih * iw  (one scale-and-shift per element)
    activation       output elements
    elementwise_*    output elements
    local_response_norm  output elements
    concat, flatten, dropout, channel_shuffle   0 (data movement)

Only kinds listed in the convention's counted_kinds contribute to the
total; everything else contributes an explicit zero in the breakdown.
The default convention counts conv2d and linear, which is how per-image
operation figures for these networks are conventionally quoted. When
include_bias is set, layers whose has_bias parameter is true add one
operation per output element.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .graph import ArchitectureSpec, GraphError, LayerNode, TensorShape, node_param
from .shapes import infer_shapes

UNITS = ("mac", "flop2")

#: Kinds whose operations are conventionally quoted for these networks.
DEFAULT_COUNTED_KINDS = frozenset({"conv2d", "linear"})


@dataclass(frozen=True)
class CountingConvention:
    """How raw layer arithmetic is turned into a single number."""

    unit: str = "mac"
    counted_kinds: frozenset[str] = DEFAULT_COUNTED_KINDS
    include_bias: bool = False

    def __post_init__(self) -> None:
        if self.unit not in UNITS:
            raise GraphError(f"unknown unit {self.unit!r}; expected one of {UNITS}")
        object.__setattr__(self, "counted_kinds", frozenset(self.counted_kinds))


@dataclass(frozen=True)
class FlopCount:
    """Result of counting one architecture at one input shape."""

    total_per_image: int
    per_layer: Mapping[str, int]
    convention: CountingConvention
    input: TensorShape

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_layer", dict(self.per_layer))

    @property
    def gigaops(self) -> float:
        return self.total_per_image / 1e9


def count_flops(
    arch: ArchitectureSpec,
    input_shape: TensorShape | None = None,
    convention: CountingConvention | None = None,
) -> FlopCount:
    """Count per-image operations for every node.

    The per-layer map carries every node id (zeros included), so the
    total always equals the sum of the breakdown.
    """
    convention = convention or CountingConvention()
    shapes = infer_shapes(arch, input_shape)
    scale = 2 if convention.unit == "flop2" else 1

    per_layer: dict[str, int] = {}
    for node in arch.nodes:
        if node.kind in convention.counted_kinds:
            macs = _node_macs(node, shapes, convention.include_bias)
        else:
            macs = 0
        per_layer[node.id] = macs * scale

    return FlopCount(
        total_per_image=sum(per_layer.values()),
        per_layer=per_layer,
        convention=convention,
        input=shapes["input"],
    )


def _node_macs(node: LayerNode, shapes: Mapping[str, TensorShape], include_bias: bool) -> int:
    kind = node.kind
    out = shapes[node.id]
    ins = [shapes[ref] for ref in node.inputs]

    if kind == "conv2d":
        x = ins[0]
        groups = node_param(node, "groups")
        k = node_param(node, "kernel_h") * node_param(node, "kernel_w")
        macs = out.elements * (x.channels // groups) * k
        if include_bias and node_param(node, "has_bias"):
            macs += out.elements
        return macs

    if kind == "linear":
        x = ins[0]
        macs = x.elements * node_param(node, "out_features")
        if include_bias and node_param(node, "has_bias"):
            macs += node_param(node, "out_features")
        return macs

    if kind == "squeeze_excite":
        x = ins[0]
        squeeze = max(1, x.channels // node_param(node, "reduction"))
        macs = 2 * x.channels * squeeze
        if include_bias:
            macs += squeeze + x.channels
        return macs

    if kind in ("maxpool", "avgpool"):
        k = node_param(node, "kernel")
        return out.elements * k * k

    if kind == "global_avgpool":
        return ins[0].elements

    if kind == "batchnorm":
        return out.elements

    if kind in ("activation", "elementwise_add", "elementwise_mul", "local_response_norm"):
        return out.elements

    if kind in ("concat", "flatten", "dropout", "channel_shuffle"):
        return 0

    raise GraphError(f"node {node.id!r}: no counting rule for kind {kind!r}")
