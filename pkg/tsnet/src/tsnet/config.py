"""Model and training configuration."""

from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class TsNetConfig:
    """Architecture and training hyperparameters.

    The encoder stack alternates attention ("gat") and isomorphism ("gin")
    graph convolutions, each followed by batch normalization, LeakyReLU,
    and dropout. Neighbor-sampling hop count always equals the encoder
    depth; the first-hop fanout is halved at each subsequent hop.
    """

    hidden_dim: int = 400
    input_dim: int = 5
    encoder: tuple = ("gat", "gin", "gat", "gin")
    dropout: float = 0.3
    head_hidden: int = 64
    features: str = "zeros"          # zeros | degree (ablation switch)
    transform: str = "scatter"       # target transform, matches spreadnet names
    max_lr: float = 0.003
    weight_decay: float = 0.01
    epochs: int = 50
    patience: int = 30
    batch_size: int = 128
    fanout: int = 32
    sample_threshold: int = 2000     # whole-graph forward at or below this
    seed: int = 0

    def __post_init__(self):
        if self.hidden_dim <= 0:
            raise ValueError("hidden_dim must be positive")
        if not self.encoder:
            raise ValueError("encoder stack must be non-empty")
        for kind in self.encoder:
            if kind not in ("gat", "gin"):
                raise ValueError(f"unknown encoder block: {kind}")
        if self.transform not in ("scatter", "none", "norm_max_scatter"):
            raise ValueError(f"unsupported transform: {self.transform}")
        if self.features not in ("zeros", "degree"):
            raise ValueError(f"unsupported feature set: {self.features}")

    @property
    def hops(self):
        return len(self.encoder)

    def fanouts(self):
        """Per-hop sampling fanouts: first-hop value halved each hop."""
        out, f = [], self.fanout
        for _ in range(self.hops):
            out.append(max(1, f))
            f //= 2
        return out

    def to_dict(self):
        d = asdict(self)
        d["encoder"] = list(self.encoder)
        return d

    @staticmethod
    def from_dict(d):
        d = dict(d)
        d["encoder"] = tuple(d.get("encoder", ("gat", "gin", "gat", "gin")))
        return TsNetConfig(**d)
