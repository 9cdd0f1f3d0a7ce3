"""The TopSpreadersNetwork model.

A single encoder (alternating graph-attention and graph-isomorphism
convolutions) is shared across all network layers; per-layer embeddings are
fused by the WiseAverage soft-attention block; a two-layer perceptron head
predicts the 4-component transformed spreading potential per actor.
"""

import torch
from torch import nn

from tsnet.data import SPS_OFFSET, SPS_SIGNED


def _segment_softmax(logits, index, n):
    """Softmax of ``logits`` grouped by ``index`` (values in [0, n))."""
    maxes = torch.full((n,), float("-inf"), dtype=logits.dtype,
                       device=logits.device)
    maxes = maxes.scatter_reduce(0, index, logits, reduce="amax",
                                 include_self=True)
    maxes = torch.where(torch.isinf(maxes), torch.zeros_like(maxes), maxes)
    ex = torch.exp(logits - maxes[index])
    denom = torch.zeros(n, dtype=logits.dtype, device=logits.device)
    denom = denom.index_add(0, index, ex)
    return ex / denom[index].clamp_min(1e-16)


class GATLayer(nn.Module):
    """Single-head graph attention convolution with self-loops."""

    def __init__(self, in_dim, out_dim, negative_slope=0.2):
        super().__init__()
        self.lin = nn.Linear(in_dim, out_dim)
        self.att_src = nn.Parameter(torch.empty(out_dim))
        self.att_dst = nn.Parameter(torch.empty(out_dim))
        self.negative_slope = negative_slope
        nn.init.xavier_uniform_(self.att_src.view(1, -1))
        nn.init.xavier_uniform_(self.att_dst.view(1, -1))

    def forward(self, x, edge_index):
        n = x.shape[0]
        h = self.lin(x)
        loops = torch.arange(n, device=x.device)
        src = torch.cat([edge_index[0], loops])
        dst = torch.cat([edge_index[1], loops])
        logits = torch.nn.functional.leaky_relu(
            h[src] @ self.att_src + h[dst] @ self.att_dst,
            self.negative_slope,
        )
        alpha = _segment_softmax(logits, dst, n)
        out = torch.zeros_like(h)
        out = out.index_add(0, dst, alpha.unsqueeze(-1) * h[src])
        return out


class GINLayer(nn.Module):
    """Graph isomorphism convolution: MLP((1+eps)·x_i + Σ_{j∈N(i)} x_j)."""

    def __init__(self, in_dim, out_dim):
        super().__init__()
        self.eps = nn.Parameter(torch.zeros(1))
        self.mlp = nn.Sequential(
            nn.Linear(in_dim, out_dim),
            nn.ReLU(),
            nn.Linear(out_dim, out_dim),
        )

    def forward(self, x, edge_index):
        agg = torch.zeros_like(x)
        agg = agg.index_add(0, edge_index[1], x[edge_index[0]])
        return self.mlp((1.0 + self.eps) * x + agg)


class Encoder(nn.Module):
    """Shared per-layer encoder: conv -> BatchNorm -> LeakyReLU -> Dropout."""

    def __init__(self, config):
        super().__init__()
        convs, norms = [], []
        in_dim = config.input_dim
        for kind in config.encoder:
            cls = GATLayer if kind == "gat" else GINLayer
            convs.append(cls(in_dim, config.hidden_dim))
            norms.append(nn.BatchNorm1d(config.hidden_dim))
            in_dim = config.hidden_dim
        self.convs = nn.ModuleList(convs)
        self.norms = nn.ModuleList(norms)
        self.act = nn.LeakyReLU()
        self.dropout = nn.Dropout(config.dropout)
        # With all-zero input features every conv output is constant across
        # actors, and a zero-initialized BatchNorm shift maps constants to
        # exactly zero, making the all-constant state a zero-gradient fixed
        # point. A small random shift breaks the symmetry so that degree
        # information can enter through the isomorphism convolutions.
        gen = torch.Generator().manual_seed(0)
        for bn in self.norms:
            with torch.no_grad():
                bn.bias.uniform_(-0.1, 0.1, generator=gen)

    def forward(self, x, edge_index):
        h = x
        for conv, norm in zip(self.convs, self.norms):
            h = conv(h, edge_index)
            if not (self.training and h.shape[0] < 2):
                h = norm(h)
            h = self.dropout(self.act(h))
        return h


class WiseAverage(nn.Module):
    """Soft-attention fusion of per-layer embeddings.

    Given stacked embeddings h of shape [L, A, d], computes per-actor
    attention T = softmax over the layer axis of W·h_l, and returns
    h_agg = Σ_l T^(l) ⊙ h_l together with T (shape [L, A, 1]).
    """

    def __init__(self, dim):
        super().__init__()
        self.weight = nn.Linear(dim, 1, bias=False)

    def forward(self, h):
        if h.shape[0] == 0:
            raise ValueError("WiseAverage requires at least one layer")
        attention = torch.softmax(self.weight(h), dim=0)
        return (attention * h).sum(dim=0), attention


class TsNet(nn.Module):
    """Shared encoder + WiseAverage fusion + 2-layer MLP head (4 outputs)."""

    def __init__(self, config):
        super().__init__()
        self.config = config
        self.encoder = Encoder(config)
        self.fusion = WiseAverage(config.hidden_dim)
        self.head = nn.Sequential(
            nn.Linear(config.hidden_dim, config.head_hidden),
            nn.LeakyReLU(),
            nn.Linear(config.head_hidden, 4),
        )

    def features(self, graph):
        if self.config.features == "degree":
            x = torch.zeros(graph.n_actors, self.config.input_dim)
            deg = graph.degrees.sum(dim=1)
            x[:, 0] = deg / deg.max().clamp_min(1.0)
            return x
        return torch.zeros(graph.n_actors, self.config.input_dim)

    def forward(self, graph, return_attention=False):
        x = self.features(graph).to(next(self.parameters()).dtype)
        per_layer = torch.stack(
            [self.encoder(x, ei) for ei in graph.edge_indices]
        )
        h_agg, attention = self.fusion(per_layer)
        p_hat = self.head(h_agg)
        if return_attention:
            return p_hat, attention
        return p_hat


def predicted_scalar(p_hat):
    """Collapse predicted 4-vectors to the ranked sps-weighted scalar."""
    w = torch.tensor(SPS_SIGNED, dtype=p_hat.dtype, device=p_hat.device)
    return SPS_OFFSET + p_hat @ w


def list_mle(scores, target_scalar):
    """ListMLE: negative log-likelihood of the target ordering.

    The target ordering sorts ``target_scalar`` descending (stable, so ties
    keep ascending position order). Returned value is the mean per-position
    negative log-likelihood.
    """
    if scores.numel() == 0:
        raise ValueError("empty ranking")
    order = torch.argsort(target_scalar, descending=True, stable=True)
    s = scores[order]
    suffix_lse = torch.flip(torch.logcumsumexp(torch.flip(s, [0]), 0), [0])
    return (suffix_lse - s).mean()


def training_loss(model, graph, targets, actor_ids=None):
    """ListMLE loss of the model on one (sub)graph against its targets."""
    from tsnet.data import target_scalar

    p_hat = model(graph)
    scores = predicted_scalar(p_hat)
    y = target_scalar(targets).to(scores.dtype)
    if actor_ids is not None:
        idx = torch.as_tensor(actor_ids, dtype=torch.long)
        scores, y = scores[idx], y[idx]
    return list_mle(scores, y)
