#!/usr/bin/env python3
"""Regenerates the bundled fixture data.

Outputs (both checked in, regenerate only deliberately):
  data/fixtures/train_corpus.jsonl     2,000 synthetic support tweets used to
                                       train word vectors and to back the
                                       device-list corpus filter
  data/fixtures/fixture_truthset.jsonl labels for fixture_corpus.jsonl with
                                       offsets computed over normalized text

Deterministic: fixed seed, fixed template tables.
"""

import json
import random
import re
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "data" / "fixtures"
SEED = 12345

SUPPORT_HANDLES = {"spotifycares"}

# ---------------------------------------------------------------- train corpus

DEVICE_FRAMES = [
    "my {} keeps crashing after the update",
    "the app crashes on my {} every time",
    "cant play music on my {} since yesterday",
    "{} here and the app wont even open",
    "using my {} and everything lags",
    "the app freezes on my {} after the latest update",
    "my {} restarts whenever i open the app",
    "still broken on my {} please fix it",
    "downloads fail on my {} constantly",
    "no sound at all on my {} today",
]

# mention -> occurrences; paired spellings share the frame cycle so their
# contexts line up
DEVICE_MENTIONS = {
    "iphone 8 plus": 70,
    "iphone8plus": 50,
    "iphone 6 plus": 60,
    "iphone6+": 45,
    "iphone 8": 25,
    "iphone 7": 20,
    "iphone xr": 20,
    "iphone x": 15,
    "iphone": 30,
    "ipad mini": 15,
    "ipad pro": 15,
    "ipod touch": 10,
    "galaxy s8": 25,
    "galaxy s8+": 20,
    "galaxy s5": 12,
    "galaxy s6": 12,
    "galaxy s9": 15,
    "galaxy note 9": 12,
    "xperia xz3": 15,
    "htc one": 12,
    "pixel 2": 15,
    "pixel xl": 12,
    "moto g4": 10,
    "zenfone 5": 10,
    "zenphone": 12,
}

PLATFORM_FRAMES = [
    "everything broke after updating to {}",
    "the {} update ruined the app for me",
    "running {} and it still crashes daily",
    "ever since the {} update nothing works",
    "updated to {} and now playlists wont load",
    "the app got slow on {} somehow",
]

PLATFORM_MENTIONS = {
    "android": 60,
    "ios": 60,
    "lollipop": 45,
    "lolipop": 25,
    "lollypop": 18,
    "oreo": 25,
    "pie": 25,
    "nougat": 15,
    "marshmallow": 12,
    "kitkat": 12,
}

SUBWORD_FRAMES = [
    "no {} coming through anymore",
    "{} arrive hours late lately",
    "why are {} so delayed this week",
]

SUBWORD_MENTIONS = {"notification": 15, "notifications": 15}

EXTRA_SENTENCES = [
    ("the new horizon view looks odd to me", 8),
    ("prime example of a broken update honestly", 8),
    ("super annoying bug in the player today", 10),
]

SUPPORT_TEMPLATES = [
    "sorry to hear that! could you try reinstalling the app for us",
    "thanks for reaching out, we are looking into this right now",
    "could you tell us which device you are using",
    "can you let us know the app version you are running",
    "we just shipped a fix, could you update and try again",
    "that does not sound right, we will flag it to the team",
    "does it also happen when you restart the device",
    "got it, passing this along to the developers now",
]

FILLER_TEMPLATES = [
    "the shuffle button disappeared from my playlist screen again",
    "why does premium cost so much these days",
    "downloads keep vanishing whenever i go offline",
    "the equalizer resets itself every single morning",
    "search results show the wrong artist half the time",
    "my daily mix has the same ten songs forever",
    "lyrics never load for half my library",
    "the sleep timer stops working after a while",
    "crossfade setting does nothing at all lately",
    "podcasts lose my place every time i pause",
    "album art stays blank on the lock screen",
    "the queue clears itself when i switch playlists",
    "volume jumps around between tracks way too much",
    "cant share songs to my group chat anymore",
    "the app logged me out three times this week",
    "storage fills up even after clearing the cache",
    "my liked songs are sorted in a weird order",
    "radio keeps playing stuff i already skipped",
    "the widget controls stopped responding yesterday",
    "payment went through twice for the family plan",
    "local files refuse to show up in my library",
    "the dark theme flickers while scrolling search",
    "song previews cut off after a few seconds",
    "my follower playlists stopped syncing overnight",
    "the heart button ignores me when offline",
]


def mention_tweets():
    tweets = []
    for table, frames in ((DEVICE_MENTIONS, DEVICE_FRAMES),
                          (PLATFORM_MENTIONS, PLATFORM_FRAMES),
                          (SUBWORD_MENTIONS, SUBWORD_FRAMES)):
        for mention, count in table.items():
            for i in range(count):
                tweets.append(frames[i % len(frames)].format(mention))
    for sentence, count in EXTRA_SENTENCES:
        tweets.extend([sentence] * count)
    return tweets


def gen_train_corpus(path: Path):
    rng = random.Random(SEED)
    user_texts = mention_tweets()
    support_texts = [SUPPORT_TEMPLATES[i % len(SUPPORT_TEMPLATES)] for i in range(80)]

    total = 2000
    filler_needed = total - len(user_texts) - len(support_texts)
    assert filler_needed > 0, "mention tables grew past the corpus budget"
    filler = [FILLER_TEMPLATES[i % len(FILLER_TEMPLATES)] for i in range(filler_needed)]

    entries = [(t, False) for t in user_texts + filler] + [(t, True) for t in support_texts]
    rng.shuffle(entries)

    with path.open("w") as out:
        for i, (text, support) in enumerate(entries):
            minute = i % 60
            hour = (i // 60) % 24
            day = 1 + (i // (60 * 24))
            tweet = {
                "id": f"tr{i:05d}",
                "text": text,
                "created_at": f"2019-01-{day:02d}T{hour:02d}:{minute:02d}:00Z",
                "conversation_id": f"cv{i:05d}",
                "author_id": "spotify_support" if support else f"ua{i % 500:03d}",
                "is_reply": False,
                "is_support": support,
            }
            out.write(json.dumps(tweet, separators=(",", ":")) + "\n")
    print(f"wrote {path} ({len(entries)} tweets)")


# ------------------------------------------------------------------- truthset

# (tweet_id, item_type, surface, occurrence)
LABELS = [
    ("t01", "device", "iphone xr", 0),
    ("t01", "platform", "ios", 0),
    ("t01", "system_version", "12.1.4", 0),
    ("t01", "app_version", "8.4.61", 0),
    ("t02", "device", "xperia xz3", 0),
    ("t02", "platform", "android", 0),
    ("t03", "platform", "android", 0),
    ("t03", "system_version", "8.0.0", 0),
    ("t03", "device", "galaxy s8 plus", 0),
    ("t04", "device", "iphone 6", 0),
    ("t04", "device", "ipad mini", 0),
    ("t05", "platform", "lolipop", 0),
    ("t06", "device", "iphone", 0),
    ("t06", "device", "s5", 0),
    ("t07", "device", "htc one", 0),
    ("t07", "platform", "android", 0),
    ("t08", "app_version", "8.4.74", 0),
    ("t09", "platform", "android", 0),
    ("t09", "system_version", "8.1", 0),
    ("t09", "device", "pixel xl", 0),
    ("t10", "platform", "android", 0),
    ("t10", "system_version", "7.0", 0),
    ("t10", "app_version", "8.4.39.673", 0),
    ("t12", "platform", "android", 0),
    ("t12", "system_version", "3.0", 0),
    ("t13", "device", "pixel 2", 0),
    ("t13", "platform", "android", 0),
    ("t13", "system_version", "9", 0),
    ("t14", "app_version", "8.4.74", 0),
    ("t15", "device", "ipad pro", 0),
    ("t16", "device", "iphone x", 0),
    ("t17", "platform", "ios", 0),
    ("t17", "system_version", "12", 0),
    ("t18", "app_version", "8.4.17", 0),
    ("t19", "platform", "android", 0),
    ("t19", "system_version", "9.1", 0),
    ("t20", "device", "galaxy s6", 0),
    ("t21", "device", "galaxy s5", 0),
    ("t21", "device", "galaxy s6", 0),
    ("t22", "platform", "pie", 0),
    ("t23", "app_version", "8.4.50", 0),
    ("t23", "device", "iphone 8", 0),
    ("t24", "device", "galaxy note 9", 0),
    ("t24", "platform", "oreo", 0),
    ("t25", "app_version", "8.4.61", 0),
    ("t25", "platform", "ios", 0),
    ("t25", "system_version", "12.1.4", 0),
    ("t26", "device", "ipod touch", 0),
    ("t27", "platform", "android", 0),
    ("t27", "system_version", "8.0", 0),
]


def normalize(text: str) -> str:
    """Mirror of the pipeline's text normalization."""
    text = text.lower()
    out = []
    i = 0
    while i < len(text):
        if text[i] == "@":
            j = i + 1
            while j < len(text) and (text[j].isalnum() and text[j].isascii() or text[j] == "_"):
                j += 1
            if j > i + 1 and text[i + 1:j] in SUPPORT_HANDLES:
                i = j
                continue
        out.append(text[i])
        i += 1
    folded = re.sub(r"\s+", " ", "".join(out))
    return folded.strip()


def gen_coder_files(corpus_path: Path):
    """Two identical per-tweet codings of "does it include context items"."""
    labelled = {tweet_id for tweet_id, _, _, _ in LABELS}
    lines = []
    with corpus_path.open() as f:
        for line in f:
            tweet = json.loads(line)
            if tweet["is_support"]:
                continue
            record = {"tweet_id": tweet["id"], "has_context": tweet["id"] in labelled}
            lines.append(json.dumps(record, separators=(",", ":")))
    for name in ("coder_a.jsonl", "coder_b.jsonl"):
        path = FIXTURES / name
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {path} ({len(lines)} codings)")


def gen_truthset(corpus_path: Path, out_path: Path):
    norm_texts = {}
    with corpus_path.open() as f:
        for line in f:
            tweet = json.loads(line)
            norm_texts[tweet["id"]] = normalize(tweet["text"])

    with out_path.open("w") as out:
        for tweet_id, item_type, surface, occurrence in LABELS:
            text = norm_texts[tweet_id]
            pos = -1
            for _ in range(occurrence + 1):
                pos = text.find(surface, pos + 1)
                assert pos >= 0, f"{tweet_id}: '{surface}' occurrence {occurrence} not found"
            label = {
                "tweet_id": tweet_id,
                "item_type": item_type,
                "start": pos,
                "end": pos + len(surface),
                "surface": surface,
            }
            out.write(json.dumps(label, separators=(",", ":")) + "\n")
    print(f"wrote {out_path} ({len(LABELS)} labels)")


if __name__ == "__main__":
    gen_train_corpus(FIXTURES / "train_corpus.jsonl")
    gen_truthset(FIXTURES / "fixture_corpus.jsonl", FIXTURES / "fixture_truthset.jsonl")
    gen_coder_files(FIXTURES / "fixture_corpus.jsonl")
