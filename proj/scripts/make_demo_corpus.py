#!/usr/bin/env python3
"""Regenerates data/corpus/iphone7-vs-s7.jsonl, the bundled 200-post replay corpus.

The corpus is synthetic and seeded, so reruns are byte-identical. Its mix is
chosen to exercise the whole pipeline: more than 50 joyful "iPhone 7" posts
(so the leaf cap evicts), posts naming both phones, posts naming neither,
posts with no lexicon evidence, negations and non-ASCII text.
"""

import datetime as dt
import json
import pathlib
import random

SEED = 20160916
TOPIC_A = "iPhone 7"
TOPIC_B = "Galaxy S7"

AUTHORS = [
    "techfan88", "mobile_mia", "gadgetguru", "dev_dan", "shutterbug", "nightowl",
    "commuter_kay", "pixelpeeper", "batterylife", "retro_rita", "appdaddy",
    "coffee_and_code", "lina.b", "jpark", "sam_the_reviewer", "zoe_writes",
]

JOY = [
    "Just got the {t} and I absolutely love it",
    "The camera on the {t} is amazing, so happy with it",
    "{t} battery is fantastic, best upgrade this year",
    "Loving my new {t}! The screen is gorgeous",
    "Honestly the {t} is perfect. Thrilled with the purchase",
    "My {t} arrived today, excited to try everything #happy",
    "The {t} feels sleek and fast, really enjoy using it",
    "So glad I picked the {t}, photos look incredible",
    "{t} stereo speakers are awesome for music",
    "Can't stop smiling, the {t} is wonderful",
    "Great job on the {t}, super impressed",
    "The {t} haptics are brilliant, what a delight",
]
SADNESS = [
    "Dropped my {t} and the screen cracked, so sad",
    "Miss my headphone jack, the {t} made me unhappy",
    "My {t} is already feeling slow, disappointed",
    "Lost my {t} on the train today. Heartbroken",
    "Sigh, the {t} battery died before lunch again",
]
ANGER = [
    "The {t} is overpriced and I hate the dongle",
    "Furious that my {t} keeps rebooting, unacceptable",
    "Store sold me a broken {t} and refused a refund, so angry",
    "Annoyed with {t} updates, ridiculous",
    "Worst customer service ever with my {t}",
]
FEAR = [
    "Is the {t} battery going to explode? Kind of scared",
    "Worried about the {t} overheating in my pocket",
    "Heard the {t} had a recall, nervous to charge it overnight",
    "Afraid my {t} got hacked, weird alerts all night",
]
DISGUST = [
    "The {t} case smells disgusting, gross",
    "Bloatware all over the {t}, yuck",
    "That {t} ad campaign is so tacky and cringe",
    "Cheap plastic feel on this {t} knockoff, nasty",
]
NEUTRAL = [
    "Picked up the {t} at the store this afternoon",
    "Comparing specs of the {t} tonight",
    "Anyone know the {t} release date in Canada?",
    "Unboxing the {t} live at 8pm",
    "{t} now available in black",
]
NEGATED = [
    "I do not love the {t} as much as I expected",
    "Never been happy with the {t} camera",
    "I'm not scared of the {t} battery at all",
]
BOTH = [
    "{a} or {b}? I love both honestly",
    "Switched from the {b} to the {a} and I am so happy",
    "The {a} camera is great but the {b} screen is gorgeous",
    "Angry that the {a} costs more than the {b}",
    "Scared my {b} will overheat, the {a} seems safer",
]
NEITHER = [
    "Coffee is amazing this morning",
    "Traffic is terrible today, so annoyed",
    "Sad to see summer end",
    "Going hiking this weekend",
    "This new album is fantastic",
    "Scared of the dentist tomorrow",
]
UNICODE = [
    "¡Me encanta el {t}! love it 😍",
    "Ich liebe das {t}, amazing display ✨",
    "{t} の カメラ is wonderful 📷",
]


def pick(rng, templates, **kw):
    return rng.choice(templates).format(**kw)


def main():
    rng = random.Random(SEED)
    texts = []
    # 60 joyful iPhone posts guarantee at least one eviction on A:joy.
    texts += [pick(rng, JOY, t=TOPIC_A) for _ in range(60)]
    texts += [pick(rng, SADNESS, t=TOPIC_A) for _ in range(8)]
    texts += [pick(rng, ANGER, t=TOPIC_A) for _ in range(8)]
    texts += [pick(rng, FEAR, t=TOPIC_A) for _ in range(5)]
    texts += [pick(rng, DISGUST, t=TOPIC_A) for _ in range(4)]
    texts += [pick(rng, NEUTRAL, t=TOPIC_A) for _ in range(6)]
    texts += [pick(rng, NEGATED, t=TOPIC_A) for _ in range(3)]
    texts += [pick(rng, UNICODE, t=TOPIC_A) for _ in range(2)]

    texts += [pick(rng, JOY, t=TOPIC_B) for _ in range(25)]
    texts += [pick(rng, SADNESS, t=TOPIC_B) for _ in range(9)]
    texts += [pick(rng, ANGER, t=TOPIC_B) for _ in range(9)]
    texts += [pick(rng, FEAR, t=TOPIC_B) for _ in range(9)]
    texts += [pick(rng, DISGUST, t=TOPIC_B) for _ in range(6)]
    texts += [pick(rng, NEUTRAL, t=TOPIC_B) for _ in range(5)]
    texts += [pick(rng, NEGATED, t=TOPIC_B) for _ in range(3)]
    texts += [pick(rng, UNICODE, t=TOPIC_B) for _ in range(1)]

    texts += [pick(rng, BOTH, a=TOPIC_A, b=TOPIC_B) for _ in range(15)]
    texts += [rng.choice(NEITHER) for _ in range(22)]
    assert len(texts) == 200, len(texts)
    rng.shuffle(texts)

    # Vary case so matching has to fold it.
    for i, text in enumerate(texts):
        if i % 17 == 3:
            texts[i] = text.replace(TOPIC_A, TOPIC_A.upper())
        elif i % 19 == 5:
            texts[i] = text.replace(TOPIC_B, TOPIC_B.lower())

    t = dt.datetime(2016, 9, 16, 8, 0, 0, tzinfo=dt.timezone.utc)
    lines = []
    for i, text in enumerate(texts):
        t += dt.timedelta(seconds=rng.randint(5, 240))
        record = {
            "id": str(776500000000000000 + i * 7919),
            "text": text,
            "created_at": t.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "author": rng.choice(AUTHORS),
            "lang": "en",
        }
        lines.append(json.dumps(record, ensure_ascii=False))

    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus" / "iphone7-vs-s7.jsonl"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} posts to {out}")


if __name__ == "__main__":
    main()
