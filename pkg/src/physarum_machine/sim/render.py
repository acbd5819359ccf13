"""Raster (PPM/PGM) and vector (SVG) views of a state snapshot."""

from __future__ import annotations

COLOR_RGB = {
    "Uncolored": (235, 230, 215),
    "Green": (60, 170, 60),
    "Yellow": (230, 200, 40),
    "Blue": (60, 90, 220),
    "Red": (210, 50, 50),
}
VEIN_RGB = (250, 245, 160)
TIP_RGB = (255, 255, 255)
ACTIVE_RGB = (255, 120, 200)


def render_pgm(snapshot: dict) -> bytes:
    """Chemo field as an 8-bit graymap."""
    chemo = snapshot["arena"]["chemo"]
    h, w = len(chemo), len(chemo[0])
    peak = max((max(row) for row in chemo), default=0.0) or 1.0
    body = bytearray()
    for row in chemo:
        for v in row:
            body.append(min(255, int(255 * v / peak)))
    return f"P5\n{w} {h}\n255\n".encode() + bytes(body)


def render_ppm(snapshot: dict) -> bytes:
    """Composite view: chemo heat, light wash, veins, flakes, tips, active."""
    arena = snapshot["arena"]
    chemo = arena["chemo"]
    light = arena["light"]
    h, w = len(chemo), len(chemo[0])
    peak = max((max(row) for row in chemo), default=0.0) or 1.0
    px = bytearray(3 * w * h)

    def put(x: int, y: int, rgb: tuple[int, int, int]) -> None:
        if 0 <= x < w and 0 <= y < h:
            i = 3 * (y * w + x)
            px[i:i + 3] = bytes(rgb)

    for y in range(h):
        for x in range(w):
            c = chemo[y][x] / peak
            li = light[y][x]
            r = int(40 * li + 90 * c)
            g = int(40 * li + 50 * c)
            b = int(60 * li + 140 * c)
            put(x, y, (min(r, 255), min(g, 255), min(b, 255)))
    for vein in snapshot["veins"]:
        for cx, cy in vein["polyline"]:
            put(cx, cy, VEIN_RGB)
    for flake in snapshot["flakes"]:
        rgb = COLOR_RGB.get(flake["color"], COLOR_RGB["Uncolored"])
        if flake["mass"] <= 0:
            rgb = tuple(v // 3 for v in rgb)
        put(flake["x"], flake["y"], rgb)
    for tip in snapshot["tips"]:
        put(int(tip["x"]), int(tip["y"]), TIP_RGB)
    for node in snapshot["nodes"]:
        if node["id"] == snapshot["active_node"]:
            put(node["x"], node["y"], ACTIVE_RGB)
    return f"P6\n{w} {h}\n255\n".encode() + bytes(px)


def render_svg(snapshot: dict, scale: int = 4) -> str:
    """Sim-graph view: vein polylines plus node and flake glyphs."""
    arena = snapshot["arena"]
    w, h = arena["width"] * scale, arena["height"] * scale
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}"'
        f' viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="#101018"/>',
    ]

    def pt(x: float, y: float) -> str:
        return f"{x * scale + scale / 2:g},{y * scale + scale / 2:g}"

    for vein in snapshot["veins"]:
        points = " ".join(pt(x, y) for x, y in vein["polyline"])
        out.append(f'<polyline points="{points}" fill="none"'
                   f' stroke="#f0e89a" stroke-width="{scale / 2:g}"/>')
    for flake in snapshot["flakes"]:
        r, g, b = COLOR_RGB.get(flake["color"], COLOR_RGB["Uncolored"])
        dim = flake["mass"] <= 0
        fill = f"rgb({r // 3},{g // 3},{b // 3})" if dim else f"rgb({r},{g},{b})"
        out.append(f'<circle cx="{flake["x"] * scale + scale / 2:g}"'
                   f' cy="{flake["y"] * scale + scale / 2:g}" r="{scale:g}"'
                   f' fill="{fill}"/>')
    for node in snapshot["nodes"]:
        shape = "#cccccc" if node["kind"] == "dynamic" else "#ffffff"
        out.append(f'<circle cx="{node["x"] * scale + scale / 2:g}"'
                   f' cy="{node["y"] * scale + scale / 2:g}" r="{scale / 2:g}"'
                   f' fill="{shape}"/>')
        if node["id"] == snapshot["active_node"]:
            out.append(f'<circle cx="{node["x"] * scale + scale / 2:g}"'
                       f' cy="{node["y"] * scale + scale / 2:g}" r="{scale:g}"'
                       f' fill="none" stroke="#ff78c8" stroke-width="2"/>')
    for tip in snapshot["tips"]:
        out.append(f'<circle cx="{tip["x"] * scale:g}" cy="{tip["y"] * scale:g}"'
                   f' r="{scale / 3:g}" fill="#ffffff"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
