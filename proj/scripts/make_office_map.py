#!/usr/bin/env python3
"""Regenerates data/office_map.json, the 80-area office floor plan.

The floor is 50 m x 30 m: four rows of rooms and areas separated by three
segmented corridors, with one exit on each side. Every coordinate is a multiple of
0.5 m so cell membership at the default 0.5 m resolution is unambiguous.
"""

import json
import pathlib

WIDTH, HEIGHT = 50.0, 30.0

# (y0, y1, [(width, id, category, subcategory, name), ...]) from south to north.
ROWS = [
    (0.0, 6.0, [
        (5.0, "220", "room", "meeting", "sonoma"),
        (3.5, "221", "room", "phone", None),
        (5.5, "222", "area", "working", "data"),
        (4.5, "223", "room", "storage", None),
        (5.0, "224", "room", "meeting", "mojave"),
        (2.0, "225", "exit", None, None),
        (3.5, "226", "room", "phone", None),
        (2.5, "227", "printer", None, None),
        (5.0, "228", "room", "meeting", "sierra"),
        (4.5, "229", "area", "working", "cloud"),
        (3.5, "230", "room", "phone", None),
        (5.5, "231", "room", "meeting", "carmel"),
    ]),
    (6.0, 8.5, [(5.0, str(240 + i), "corridor", None, None) for i in range(10)]),
    (8.5, 14.0, [
        (4.5, "200", "area", "working", "planning"),
        (2.5, "201", "printer", None, None),
        (3.5, "202", "room", "phone", None),
        (5.5, "203", "room", "meeting", "golden gate"),
        (4.5, "204", "area", "working", "speech"),
        (4.0, "205", "room", "storage", None),
        (5.0, "206", "area", "lounge", None),
        (5.0, "207", "room", "meeting", "alcatraz"),
        (4.5, "208", "area", "working", None),
        (3.5, "209", "room", "phone", None),
        (4.0, "210", "area", "working", "design"),
        (3.5, "211", "area", "working", "finance"),
    ]),
    (14.0, 16.5, [(4.0, "350", "exit", None, None)]
     + [(w, str(340 + i), "corridor", None, None)
        for i, w in enumerate([4.0, 4.5, 4.0, 4.0, 4.5, 4.0, 4.0, 4.5, 4.0, 4.5])]
     + [(4.0, "351", "exit", None, None)]),
    (16.5, 22.0, [
        (4.5, "300", "area", "working", "hardware"),
        (4.5, "301", "area", "working", "software"),
        (5.5, "302", "area", "entertainment", None),
        (4.0, "303", "area", "working", "robotics"),
        (2.5, "304", "printer", None, None),
        (4.5, "305", "area", "working", None),
        (4.5, "306", "room", "meeting", "yosemite"),
        (5.0, "307", "area", "reception", None),
        (4.0, "308", "area", "working", "vision"),
        (3.5, "309", "room", "phone", None),
        (4.0, "310", "area", "working", None),
        (3.5, "311", "area", "kitchen", None),
    ]),
    (22.0, 24.5, [(5.0, str(140 + i), "corridor", None, None) for i in range(10)]),
    (24.5, 30.0, [
        (5.5, "120", "room", "meeting", "sequoia"),
        (3.5, "121", "room", "phone", None),
        (2.5, "122", "printer", None, None),
        (5.0, "123", "room", "meeting", "tahoe"),
        (5.0, "124", "room", "meeting", "shasta"),
        (2.0, "125", "exit", None, None),
        (3.5, "126", "room", "phone", None),
        (4.5, "127", "room", "storage", None),
        (5.0, "128", "room", "meeting", "redwood"),
        (3.5, "129", "room", "phone", None),
        (5.0, "130", "room", "meeting", "monterey"),
        (5.0, "131", "room", "meeting", "napa"),
    ]),
]


def rect(x0, y0, x1, y1):
    return [[x0, y0], [x1, y0], [x1, y1], [x0, y1]]


def main():
    areas = []
    for y0, y1, cells in ROWS:
        x = 0.0
        for width, area_id, category, sub, name in cells:
            area = {"id": area_id, "category": category}
            if sub:
                area["subcategory"] = sub
            if name:
                area["name"] = name
            area["polygon"] = rect(x, y0, x + width, y1)
            areas.append(area)
            x += width
        assert abs(x - WIDTH) < 1e-9, (y0, x)
    assert len(areas) == 80, len(areas)
    doc = {
        "boundary": rect(0.0, 0.0, WIDTH, HEIGHT),
        "resolution": 0.5,
        "areas": areas,
    }
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "office_map.json"
    out.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"wrote {out} with {len(areas)} areas")


if __name__ == "__main__":
    main()
