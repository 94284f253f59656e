"""
Emitter for standalone plotting scripts.

The emitted script reads the sweep table stored next to it (CSV or JSON mirror)
and draws fairness visibility per group against delta, with each group's
acceptance probability as a dashed reference line. It needs pandas and
matplotlib at run time; netfair itself does not.
"""

from pathlib import Path
from typing import Union

from .manifest import RunManifest

PathLike = Union[str, Path]

_SWEEP_TEMPLATE = '''#!/usr/bin/env python
{header}"""Plot fairness visibility against neighborhood size."""
import argparse
import json
from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd

SWEEP_TABLE = Path(__file__).with_name({table_name!r})


def load(path):
    path = Path(path)
    if path.suffix == '.json':
        with open(path, encoding='utf-8') as f:
            return pd.DataFrame(json.load(f)['rows'])
    return pd.read_csv(path, comment='#')


def plot_sweep(df, output=None):
    fig, ax = plt.subplots(figsize=(6, 4))
    for group, rows in df.groupby('group', sort=True):
        rows = rows.sort_values('delta')
        line, = ax.plot(rows['delta'], rows['fairness_visibility'], marker='o', label=f"group {{group}}")
        ax.axhline(rows['acceptance_probability'].iloc[0], color=line.get_color(), linestyle='--', linewidth=1)
    ax.set_xlabel('delta')
    ax.set_ylabel('fairness visibility')
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    if output:
        fig.savefig(output, dpi=150)
    else:
        plt.show()


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='Plot a fairness visibility sweep')
    parser.add_argument('data', nargs='?', default=SWEEP_TABLE, help='Sweep table to load')
    parser.add_argument('--output', help='Save the figure instead of showing it')
    args = parser.parse_args()
    plot_sweep(load(args.data), args.output)
'''


def render_sweep_script(table_name: str, manifest: RunManifest) -> str:
    """Script text for a sweep table (CSV or JSON mirror) stored next to the script."""
    return _SWEEP_TEMPLATE.format(header=manifest.header(), table_name=table_name)


def write_sweep_script(script_path: PathLike, table_path: PathLike, manifest: RunManifest) -> Path:
    """Write the plotting script next to its sweep table."""
    script_path = Path(script_path)
    script_path.parent.mkdir(parents=True, exist_ok=True)
    with open(script_path, 'w', encoding='utf-8', newline='') as f:
        f.write(render_sweep_script(Path(table_path).name, manifest))
    return script_path
