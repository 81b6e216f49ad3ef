"""Agent checkpoints as ``.npz`` archives.

Layout: a ``format`` entry holding the string ``ecolight-checkpoint``, a
``version`` entry (int, currently 1), an ``agent`` entry with the agent key,
and one array per tensor from ``agent.state_dict()`` under its own name.
"""

from pathlib import Path

import numpy as np

FORMAT = "ecolight-checkpoint"
VERSION = 1


class CheckpointError(ValueError):
    pass


def save_checkpoint(agent, path) -> Path:
    path = Path(path)
    tensors = agent.state_dict()
    reserved = {"format", "version", "agent"} & set(tensors)
    if reserved:
        raise CheckpointError(f"tensor names clash with header fields: {sorted(reserved)}")
    with open(path, "wb") as fh:
        np.savez(fh, format=np.array(FORMAT), version=np.array(VERSION), agent=np.array(agent.key),
                 **tensors)
    return path


def load_checkpoint(agent, path) -> None:
    with np.load(Path(path), allow_pickle=False) as data:
        if "format" not in data or str(data["format"]) != FORMAT:
            raise CheckpointError(f"{path}: not an ecolight checkpoint")
        version = int(data["version"])
        if version != VERSION:
            raise CheckpointError(f"{path}: unsupported checkpoint version {version}")
        if str(data["agent"]) != agent.key:
            raise CheckpointError(f"{path}: checkpoint is for agent {str(data['agent'])!r}, not {agent.key!r}")
        agent.load_state_dict({k: data[k] for k in data.files if k not in ("format", "version", "agent")})
