# Copyright 2026 The bimlab Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the U-net parity fixtures with an independent PyTorch forward.

Writes weights/ (a bundle in the bimlab tensor format) and vectors/ (100
input/output pairs). Run from this directory: python3 make_fixtures.py
"""

import json
import pathlib

import numpy as np
import torch
from torch import nn

SEED = 20260101
COUNT = 100
SIZE = 32


class UNet(nn.Module):
    def __init__(self, io=2, f=16):
        super().__init__()
        c = lambda i, o: nn.Conv2d(i, o, 3, padding=1)
        self.enc1 = nn.ModuleList([c(io, f), c(f, f)])
        self.enc2 = nn.ModuleList([c(f, 2 * f), c(2 * f, 2 * f)])
        self.bott = nn.ModuleList([c(2 * f, 4 * f), c(4 * f, 4 * f)])
        self.up1 = nn.ConvTranspose2d(4 * f, 2 * f, 2, stride=2)
        self.dec1 = nn.ModuleList([c(4 * f, 2 * f), c(2 * f, 2 * f)])
        self.up2 = nn.ConvTranspose2d(2 * f, f, 2, stride=2)
        self.dec2 = nn.ModuleList([c(2 * f, f), c(f, f)])
        self.out = nn.Conv2d(f, io, 1)

    @staticmethod
    def block(layers, x):
        for layer in layers:
            x = torch.relu(layer(x))
        return x

    def forward(self, x):
        e1 = self.block(self.enc1, x)
        e2 = self.block(self.enc2, nn.functional.max_pool2d(e1, 2))
        b = self.block(self.bott, nn.functional.max_pool2d(e2, 2))
        d1 = self.block(self.dec1, torch.cat([e2, self.up1(b)], dim=1))
        d2 = self.block(self.dec2, torch.cat([e1, self.up2(d1)], dim=1))
        return self.out(d2)


def layers(net):
    named = {}
    for group in ("enc1", "enc2", "bott", "dec1", "dec2"):
        for k, layer in enumerate(getattr(net, group)):
            named[f"{group}.conv{k + 1}"] = (layer.weight, layer.bias)
    # ConvTranspose2d stores (in, out, kh, kw); the bundle stores (out, in, kh, kw).
    named["up1.deconv"] = (net.up1.weight.transpose(0, 1), net.up1.bias)
    named["up2.deconv"] = (net.up2.weight.transpose(0, 1), net.up2.bias)
    named["out.conv"] = (net.out.weight, net.out.bias)
    return named


def write_bundle(directory, payload_name, tensors, extra):
    directory.mkdir(parents=True, exist_ok=True)
    entries, offset = [], 0
    with open(directory / payload_name, "wb") as fh:
        for name, array in tensors:
            data = np.ascontiguousarray(array, dtype="<f4")
            fh.write(data.tobytes())
            entries.append({"name": name, "file": payload_name, "shape": list(data.shape),
                            "dtype": "float32", "offset": offset})
            offset += data.nbytes
    manifest = dict(extra)
    manifest["tensors"] = entries
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def main():
    torch.manual_seed(SEED)
    net = UNet().eval()
    root = pathlib.Path(__file__).resolve().parent

    tensors = []
    for name, (w, b) in layers(net).items():
        tensors.append((f"{name}.weight", w.detach().numpy()))
        tensors.append((f"{name}.bias", b.detach().numpy()))
    arch = {"io_channels": 2, "base_filters": 16, "kernel": 3}
    write_bundle(root / "weights", "weights.bin", tensors,
                 {"format": "bimlab-unet", "architecture": arch, "source": "pytorch"})

    gen = torch.Generator().manual_seed(SEED + 1)
    scales = torch.logspace(-2, 1, COUNT)
    inputs = torch.randn(COUNT, 2, SIZE, SIZE, generator=gen) * scales.view(-1, 1, 1, 1)
    with torch.no_grad():
        outputs = net(inputs)
    vectors = root / "vectors"
    vectors.mkdir(parents=True, exist_ok=True)
    write_bundle(vectors, "inputs.bin", [("inputs", inputs.numpy())], {"source": "pytorch"})
    manifest = json.loads((vectors / "manifest.json").read_text())
    np.ascontiguousarray(outputs.numpy(), dtype="<f4").tofile(vectors / "outputs.bin")
    manifest["tensors"].append({"name": "outputs", "file": "outputs.bin", "shape": list(outputs.shape),
                                "dtype": "float32", "offset": 0})
    (vectors / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
