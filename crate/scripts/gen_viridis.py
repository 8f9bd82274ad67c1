"""Regenerate the heatmap color table from matplotlib's viridis map."""
import sys

from matplotlib import colormaps

cmap = colormaps["viridis"].resampled(256)
hexes = ["#%02x%02x%02x" % tuple(round(255 * c) for c in cmap(i)[:3]) for i in range(256)]

with open(sys.argv[1], "w") as rs:
    rs.write("// Generated by scripts/gen_viridis.py from matplotlib's viridis.\n")
    rs.write("pub const VIRIDIS: [&str; 256] = [\n")
    for i in range(0, 256, 8):
        rs.write("    " + " ".join('"%s",' % h for h in hexes[i : i + 8]) + "\n")
    rs.write("];\n")

with open(sys.argv[2], "w") as md:
    md.write("# Heatmap color table\n\n")
    md.write("`mdgsp render` and `--svg` map normalized power `t` in `[0, 1]` to entry\n")
    md.write("`min(255, floor(256 t))` of this 256-step viridis table. Regenerate with\n")
    md.write("`python3 scripts/gen_viridis.py crates/cli/src/viridis.rs docs/viridis.md`.\n\n")
    md.write("| index | color |\n|---:|---|\n")
    for i, h in enumerate(hexes):
        md.write("| %d | `%s` |\n" % (i, h))
