"""Layers, parameter bookkeeping, and the Adam optimizer."""
from __future__ import annotations

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor


class Parameter(Tensor):
    __slots__ = ("name", "m", "v")

    def __init__(self, data, name: str, dtype=np.float32):
        super().__init__(np.asarray(data, dtype=dtype), requires_grad=True)
        self.name = name
        self.m = np.zeros_like(self.data)
        self.v = np.zeros_like(self.data)


def uniform_init(rng: np.random.Generator, shape, fan_in: int) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in) if fan_in > 0 else 1.0
    return rng.uniform(-bound, bound, size=shape)


def adam_step(params, lr: float = 0.001, beta1: float = 0.9, beta2: float = 0.999,
              eps: float = 1e-8, t: int = 1) -> None:
    """In-place Adam update with bias correction; skips params with no grad."""
    if t < 1:
        raise ValueError(f"step counter t must be >= 1, got {t}")
    for p in params:
        if p.grad is None:
            continue
        g = p.grad.astype(p.data.dtype, copy=False)
        p.m = beta1 * p.m + (1.0 - beta1) * g
        p.v = beta2 * p.v + (1.0 - beta2) * (g * g)
        m_hat = p.m / (1.0 - beta1 ** t)
        v_hat = p.v / (1.0 - beta2 ** t)
        p.data = p.data - lr * m_hat / (np.sqrt(v_hat) + eps)


class Module:
    """Minimal parameter container; subclasses set Parameters/submodules as attributes."""

    def parameters(self):
        out = []
        for value in self.__dict__.values():
            if isinstance(value, Parameter):
                out.append(value)
            elif isinstance(value, Module):
                out.extend(value.parameters())
            elif isinstance(value, (list, tuple)):
                for item in value:
                    if isinstance(item, Module):
                        out.extend(item.parameters())
                    elif isinstance(item, Parameter):
                        out.append(item)
        return out

    def buffers(self):
        """(name, ndarray) pairs of non-trainable state (batchnorm running stats)."""
        out = []
        for value in self.__dict__.values():
            if isinstance(value, Module):
                out.extend(value.buffers())
            elif isinstance(value, (list, tuple)):
                for item in value:
                    if isinstance(item, Module):
                        out.extend(item.buffers())
        return out


class Linear(Module):
    def __init__(self, in_dim: int, out_dim: int, rng, name: str, dtype=np.float32):
        self.weight = Parameter(uniform_init(rng, (in_dim, out_dim), in_dim),
                                f"{name}.weight", dtype)
        self.bias = Parameter(uniform_init(rng, (out_dim,), in_dim), f"{name}.bias", dtype)

    def __call__(self, x: Tensor) -> Tensor:
        return ad.linear(x, self.weight, self.bias)


class Conv2d(Module):
    def __init__(self, in_ch: int, out_ch: int, kernel: int, rng, name: str,
                 stride: int = 1, padding: int = 0, dtype=np.float32):
        fan_in = in_ch * kernel * kernel
        self.kernel = Parameter(uniform_init(rng, (out_ch, in_ch, kernel, kernel), fan_in),
                                f"{name}.kernel", dtype)
        self.bias = Parameter(uniform_init(rng, (out_ch,), fan_in), f"{name}.bias", dtype)
        self.stride = stride
        self.padding = padding

    def __call__(self, x: Tensor) -> Tensor:
        return ad.conv2d(x, self.kernel, stride=self.stride, padding=self.padding,
                         bias=self.bias)


class BatchNorm2d(Module):
    def __init__(self, ch: int, name: str, dtype=np.float32):
        self.gamma = Parameter(np.ones(ch), f"{name}.gamma", dtype)
        self.beta = Parameter(np.zeros(ch), f"{name}.beta", dtype)
        self.running_mean = np.zeros(ch, dtype=np.float64)
        self.running_var = np.ones(ch, dtype=np.float64)
        self._name = name

    def __call__(self, x: Tensor, train: bool) -> Tensor:
        return ad.batchnorm2d(x, self.gamma, self.beta, self.running_mean,
                              self.running_var, train=train)

    def buffers(self):
        return [(f"{self._name}.running_mean", self.running_mean),
                (f"{self._name}.running_var", self.running_var)]


class GRULayer(Module):
    def __init__(self, in_dim: int, hidden: int, rng, name: str, dtype=np.float32):
        self.hidden = hidden
        mk = lambda shape, fan, suffix: Parameter(uniform_init(rng, shape, fan),
                                                  f"{name}.{suffix}", dtype)
        self.Wz = mk((in_dim, hidden), in_dim, "Wz")
        self.Wr = mk((in_dim, hidden), in_dim, "Wr")
        self.Wh = mk((in_dim, hidden), in_dim, "Wh")
        self.Uz = mk((hidden, hidden), hidden, "Uz")
        self.Ur = mk((hidden, hidden), hidden, "Ur")
        self.Uh = mk((hidden, hidden), hidden, "Uh")
        self.bz = mk((hidden,), hidden, "bz")
        self.br = mk((hidden,), hidden, "br")
        self.bh = mk((hidden,), hidden, "bh")

    def __call__(self, x_seq: Tensor, h0: Tensor | None = None) -> Tensor:
        if h0 is None:
            T, B, _ = x_seq.shape
            h0 = Tensor(np.zeros((B, self.hidden), dtype=x_seq.dtype))
        params = {"Wz": self.Wz, "Wr": self.Wr, "Wh": self.Wh,
                  "Uz": self.Uz, "Ur": self.Ur, "Uh": self.Uh,
                  "bz": self.bz, "br": self.br, "bh": self.bh}
        return ad.gru_layer(x_seq, h0, params)


class Bottleneck(Module):
    """1x1 reduce -> 3x3 -> 1x1 expand residual block with projection shortcut."""

    def __init__(self, in_ch: int, mid_ch: int, out_ch: int, rng, name: str,
                 stride: int = 1, dtype=np.float32):
        self.conv1 = Conv2d(in_ch, mid_ch, 1, rng, f"{name}.conv1", dtype=dtype)
        self.bn1 = BatchNorm2d(mid_ch, f"{name}.bn1", dtype)
        self.conv2 = Conv2d(mid_ch, mid_ch, 3, rng, f"{name}.conv2", stride=stride,
                            padding=1, dtype=dtype)
        self.bn2 = BatchNorm2d(mid_ch, f"{name}.bn2", dtype)
        self.conv3 = Conv2d(mid_ch, out_ch, 1, rng, f"{name}.conv3", dtype=dtype)
        self.bn3 = BatchNorm2d(out_ch, f"{name}.bn3", dtype)
        if in_ch != out_ch or stride != 1:
            self.proj = Conv2d(in_ch, out_ch, 1, rng, f"{name}.proj", stride=stride,
                               dtype=dtype)
            self.bn_proj = BatchNorm2d(out_ch, f"{name}.bn_proj", dtype)
        else:
            self.proj = None
            self.bn_proj = None

    def __call__(self, x: Tensor, train: bool) -> Tensor:
        y = ad.relu(self.bn1(self.conv1(x), train))
        y = ad.relu(self.bn2(self.conv2(y), train))
        y = self.bn3(self.conv3(y), train)
        shortcut = x if self.proj is None else self.bn_proj(self.proj(x), train)
        return ad.relu(ad.add(y, shortcut))
