"""Regenerate the social-context fixtures used by the core integration tests.

    python3 fixtures/build_social_fixtures.py

Output is deterministic (seeded); rerunning must leave the files unchanged.
"""

from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "crates/core/tests/fixtures/social"

import json, random
from datetime import datetime, timedelta, timezone
rng = random.Random(20130226)
T = "http://blog.example.org/2012/02/digital-content-lost.html"
TPDL = "http://www.cs.example.edu/pubs/2012/digital-content-lost.pdf"
DASH = "http://dashes.com/anil/2011/01/if-you-didnt-blog-it-it-didnt-happen.html"
start = datetime(2013, 2, 28, 12, 0, tzinfo=timezone.utc)
authors = ["newsdesk","textfiles","ndiipp","archivist","revolutionarchive","webarchiving","dlib","archiveteam","libraryjournal","digipres","anildash","jenhistorian","cairoblogger","tahrirtweets","waybackmachine"]
tags = ["jan25","egypt","archives","digitalpreservation","history","webarchiving","arabspring","tahrir","linkrot","socialmedia"]
main_short = "http://t.co/0A1q2fzz"
other_shorts = [f"http://bit.ly/lmr{i:02d}" for i in range(20)]
LEAD = "You may have seen this already. Arab Spring digital content is apparently being lost."
heads = ["Wow:", "Sad.", "Important:", "Read this.", "Must read #history:"]
tails = ["#jan25", "#archives", "#digitalpreservation", "(via @ndiipp)", "#webarchiving"]
fillers = [
  "Lost in the revolution: a year after the Egyptian uprising",
  "How much of the Arab Spring web is already gone?",
  "Great study on social media and web archiving",
  "Ten percent of shared resources vanish within a year",
  "Link rot eats our history",
  "New paper on the decay of shared web resources",
  "Archive the web before it disappears",
  "Interesting numbers on disappearing tweets and links",
  "Half the links from the Egyptian revolution are dead or unarchived",
  "Digital history is fragile",
  "Why we need web archives",
  "Reading about lost content from Tahrir square",
  "Web preservation matters more than ever",
  "A grim look at link decay",
  "Our record of recent history is leaking",
  "Social media as a historical record has holes",
  "The web forgets faster than we think",
  "Must read for archivists",
  "Content shared during the uprising is going missing",
  "Preserve your links",
  "Tweets and links from 2011 are already disappearing",
  "This is why archiving matters",
  "Sobering data on vanishing resources",
  "What happens when history is hosted on a free blog",
  "The half life of a shared link",
  "Nothing lasts forever online",
]
posts = []
def add(text, links):
    posts.append((text, links))
for i in range(23):
    add(f"@newsdesk {LEAD}", None)
for h, t in zip(heads, tails):
    add(f"{h} {LEAD.replace('You', 'you', 1)} {t}", None)
n_fill = 290 - len(posts)
for i in range(n_fill):
    f = fillers[i % len(fillers)]
    tag = tags[rng.randrange(len(tags))]
    add(f"{f} #{tag}" if rng.random() < 0.6 else f, None)
order = list(range(290)); rng.shuffle(order)
# link assignment: 19 posts carry main_short, others spread over 20 shorts (<=14 each)
main_idx = set(order[:19])
tpdl_idx = set(order[100:108])
dash_idx = set(order[150:155])
lines = []
k = 0
for pos, idx in enumerate(order):
    text, _ = posts[idx]
    if idx in main_idx:
        short = main_short
    else:
        short = other_shorts[k % 20]; k += 1
    urls = [{"short": short, "resolved": T}]
    if idx in tpdl_idx: urls.append({"short": "http://t.co/tpdl2012", "resolved": TPDL})
    if idx in dash_idx: urls.append({"short": "http://bit.ly/dashblog", "resolved": DASH})
    lines.append({"id": str(1000 + pos), "author": authors[rng.randrange(len(authors))],
                  "text": f"{text} {short}", "created_at": (start - timedelta(hours=pos * 3)).strftime("%Y-%m-%dT%H:%M:%SZ"), "urls": urls})
with open(OUT / "context_290.jsonl", "w") as f:
    for l in lines: f.write(json.dumps(l) + "\n")
# 512-post file for truncation
T2 = "http://example.org/popular"
with open(OUT / "popular_512.jsonl", "w") as f:
    for i in range(512):
        ts = (start - timedelta(minutes=i * 7)).strftime("%Y-%m-%dT%H:%M:%SZ")
        f.write(json.dumps({"id": f"p{i:03d}", "author": authors[i % len(authors)], "text": f"{fillers[i % len(fillers)]} http://t.co/pop{i%5}", "created_at": ts, "urls": [{"short": f"http://t.co/pop{i%5}", "resolved": T2}]}) + "\n")
