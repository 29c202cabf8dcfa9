#!/usr/bin/env python3
"""Generate the football-player fixture used by the walk-through script.

95 players in five clubs of 19, 1046 edges (all teammates plus 191 cross-club
links), 40 quantitative attributes. Output is deterministic for a given seed.

Usage: gen_walkthrough.py [out.json] [--seed N]
"""
import argparse
import itertools
import json
import random

CLUB_SIZE = 19
CLUBS = 5
CROSS_EDGES = 191

KEY_ATTRS = ["minutes", "appearances", "shots", "goals", "ball_possession", "touches"]
OTHER_ATTRS = [
    "passes", "pass_accuracy", "key_passes", "crosses", "long_balls", "through_balls",
    "dribbles", "dribbles_won", "tackles", "tackles_won", "interceptions", "clearances",
    "blocks", "aerials_won", "fouls", "fouls_suffered", "yellow_cards", "red_cards",
    "offsides", "assists", "expected_goals", "expected_assists", "shots_on_target",
    "big_chances", "big_chances_missed", "dispossessed", "duels_won", "recoveries",
    "saves", "distance_km", "sprints", "top_speed", "rating",
]

# Two standout strikers at different clubs, each with a teammate; the two
# teammates are the only cross-club link among these six players.
STRIKER_A, WINGER = 9, 10       # club 0
STRIKER_B, MIDFIELDER = 28, 27  # club 1
PROTECTED = {8, 9, 10, 27, 28, 29}
SUBSTITUTES = [45, 46, 47]      # club 2, minutes never recorded

LABELS = {
    STRIKER_A: "Striker A",
    STRIKER_B: "Striker B",
    WINGER: "Winger",
    MIDFIELDER: "Midfielder",
}


def pid(i):
    return f"p{i:02d}"


def make_players(rng):
    players = []
    for i in range(CLUB_SIZE * CLUBS):
        a = {
            "club": i // CLUB_SIZE,
            "minutes": rng.randint(0, 700),
            "appearances": rng.randint(0, 8),
            "shots": rng.randint(0, 12),
            "goals": rng.randint(0, 2),
            "ball_possession": round(rng.uniform(20, 60), 1),
            "touches": rng.randint(100, 900),
        }
        for name in OTHER_ATTRS:
            if rng.random() < 0.03:
                a[name] = None
            else:
                a[name] = round(rng.uniform(0, 100), 2)
        players.append(a)

    players[STRIKER_A].update(minutes=1000, appearances=12, shots=44, goals=6, ball_possession=80.0, touches=1400)
    players[STRIKER_B].update(minutes=1080, appearances=12, shots=43, goals=5, ball_possession=40.0, touches=700)
    for k, i in enumerate(SUBSTITUTES):
        players[i].update(minutes=None, appearances=3, shots=14 + k, goals=3)
    players[SUBSTITUTES[1]]["goals"] = None
    return players


def make_edges(rng):
    edges = []
    for c in range(CLUBS):
        members = range(c * CLUB_SIZE, (c + 1) * CLUB_SIZE)
        for a, b in itertools.combinations(members, 2):
            edges.append((a, b, rng.choice([1, 2])))
    cross = {(WINGER, MIDFIELDER)}
    n = CLUB_SIZE * CLUBS
    while len(cross) < CROSS_EDGES:
        a, b = sorted(rng.sample(range(n), 2))
        if a // CLUB_SIZE == b // CLUB_SIZE:
            continue
        if a in PROTECTED and b in PROTECTED:
            continue
        cross.add((a, b))
    for a, b in sorted(cross):
        edges.append((a, b, 1))
    return edges


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out", nargs="?", default="walkthrough.json")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    players = make_players(rng)
    edges = make_edges(rng)

    nodes = [
        {"id": pid(i), "label": LABELS.get(i, f"Player {i:02d}"), "attrs": attrs}
        for i, attrs in enumerate(players)
    ]
    rng.shuffle(nodes)
    edge_records = []
    for a, b, w in edges:
        if rng.random() < 0.5:
            a, b = b, a
        edge_records.append({"source": pid(a), "target": pid(b), "weight": w})
    rng.shuffle(edge_records)

    schema = [{"name": "club"}] + [{"name": k} for k in KEY_ATTRS] + [{"name": k} for k in OTHER_ATTRS]
    schema[1]["unit"] = "min"
    doc = {"nodeSchema": schema, "nodes": nodes, "edges": edge_records}
    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")
    print(f"{args.out}: {len(nodes)} nodes, {len(edge_records)} edges, {len(schema)} attributes")


if __name__ == "__main__":
    main()
