#!/usr/bin/env python3
# Copyright 2026 The RETTA Authors.
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

"""Generates the synthetic traffic-signal tweet corpus used by tests.

Output is deterministic for a given --seed. Usage:

  tools/gen_fixture_corpus.py --out data/fixtures/tst_tweets.jsonl
"""

import argparse
import datetime
import json
import random

PLACES = """
macleod crowchild deerfoot glenmore stoney sarcee bowness edmonton memorial
shaganappi centre barlow marlborough beddington northland sunridge
crowfoot shawnessy sundance tuscany varsity kensington mission inglewood
bridgeland ramsay renfrew hillhurst sunnyside marda altadena brentwood
dalhousie huntington ranchlands evergreen cranston mahogany auburn seton
quarry chinook heritage anderson southland acadia haysboro willow
airdrie cochrane okotoks chestermere banff canmore lakeview elbow
fairview glamorgan hawkwood killarney montgomery parkdale rosscarrock
scarboro tuxedo wildwood signal-hill strathcona aspen citadel edgemont
hamptons hidden kincora nolan panorama royal sage sherwood skyview
""".split()

GENERAL = """
vehicle vehicles truck trucks semi pickup motorcycle taxi uber delivery van
driver drivers motorist motorists honking horn speeding speed limit
photo radar ticket enforcement officer patrol warning sign signs signage
pothole potholes pavement asphalt snow ice icy plowed plow sanding slippery
rain fog glare sunset sunrise visibility weather winter spring chinook
neighbourhood community residents parents school zone playground hospital
mall arena stadium university college office downtown airport industrial
morning afternoon midnight weekday weekend monday tuesday wednesday
thursday friday saturday sunday yesterday tomorrow week month year
council alderman councillor mayor engineer engineers department staff
complaint complaints survey feedback petition meeting consultation
budget cost costs money taxes funding contract contractor crews
traffic signal signals light lights timing intersection corridor
gravel dust mud puddle flooding underpasses bridge bridges tunnel river
parking meter garage lot stall loading zone permit fines towing towed
noise exhaust pollution emissions idling fuel gas electric charger
courier bus-only carpool hov shuttle cab limo rideshare detector-loop
commuter tourist visitor newcomer student worker nurse teacher shopper
grocery pharmacy library gym church temple clinic daycare bakery cafe
""".split()

THEMES = {
    "signalfail": {
        "tags": ["signalfail", "yyctraffic"],
        "openers": [
            "traffic lights malfunctioning again at {p} and {q}",
            "signal at {p} is dark after the storm",
            "light stuck on red at {p} for twenty minutes",
            "another accident at {p} because the signal failed",
            "flashing lights at {p} causing chaos near {q}",
            "detector malfunction at {p} skipping the left turn arrow",
        ],
        "words": """
malfunction malfunctioning broken dark outage failure failed fault faulty
stuck flashing blackout accident crash collision dangerous hazard unsafe
repair fix crew technician backup battery power storm flicker dead glitch
reliable unreliable intermittent reboot controller cabinet detector loop
wiring sparks smoke arrow amber lamp bulb replaced outage restore restored
ignored confusing emergency police directing fender bender tow ambulance
""".split(),
    },
    "congestion": {
        "tags": ["congestion", "commute"],
        "openers": [
            "waited three cycles at {p} this morning",
            "{p} backed up all the way to {q} again",
            "timing on {p} is terrible during rush hour",
            "stopped at every single light along {p}",
            "gridlock on {p} near {q} every evening",
        ],
        "words": """
slow slower delay delayed waiting wait queue queues jammed jam gridlock
backed backup congestion congested crawling bumper stuck minutes hour hours
rush peak evening morning cycle cycles green red short long coordination
coordinated uncoordinated corridor progression wave timing retime retiming
throughput capacity bottleneck merge ramp lane lanes turning turn
frustrating endless ridiculous painful late lateness commute commuters
""".split(),
    },
    "transitapp": {
        "tags": ["transitapp", "yyctransit"],
        "openers": [
            "the transit app map never loads near {p}",
            "cannot find the delay alerts for {p} in the app",
            "bus priority at {p} does not seem to work",
            "app shows the wrong arrival time at {p}",
        ],
        "words": """
app application screen menu button buttons icon icons confusing intuitive
update updated crash crashes loading login password account notification
notifications alert alerts arrival arrivals schedule schedules tracking
realtime bus buses train platform station stop stops route routes transfer
rider riders fare card tap accessible accessibility font readable contrast
offline battery phone android iphone tablet website browser feature
""".split(),
    },
    "bikeyyc": {
        "tags": ["bikeyyc", "walkyyc"],
        "openers": [
            "pedestrian button at {p} does nothing",
            "crossing {p} on foot is scary with turning cars",
            "bike lane on {p} ends right before the intersection",
            "walk signal at {p} is far too short for seniors",
        ],
        "words": """
pedestrian pedestrians crosswalk crossing walk walking walker seniors kids
children school stroller wheelchair blind audible beep countdown timer
bike bikes bicycle cyclist cyclists lane lanes path pathway protected
painted sidewalk curb ramp refuge island visibility night dark lit
scooter scooters safety safer yield yielding drivers right-turn leading
interval exclusive scramble phase push button wait short seconds
""".split(),
    },
    "smartcity": {
        "tags": ["smartcity", "yycroads"],
        "openers": [
            "the city should add adaptive signals on {p}",
            "would love a live map of signal timing for {p}",
            "please let residents report signal problems at {p} online",
            "sensors on {p} could adjust timing automatically",
        ],
        "words": """
adaptive sensor sensors camera cameras data dashboard portal report
reporting request requests feature suggestion idea plan planning study
volume volumes counts analytics prediction forecast optimize optimization
automatic automatically adjust adjustment schedule weekend holiday event
stadium concert parade construction closure closures detour detours
open transparent publish share citizens residents council budget pilot
privacy secure security hacked hacking password encrypted access logs
""".split(),
    },
}

FILLER = """
today tonight again still really literally seriously honestly please hey
anyone else noticed why how long thanks city calgary yyc downtown
northwest southeast southwest northeast near between block avenue street
trail road drive boulevard intersection intersections overpass underpass
""".split()


def make_doc(rng, index, start):
    theme_name = rng.choices(
        list(THEMES), weights=[30, 25, 15, 15, 15])[0]
    theme = THEMES[theme_name]
    p, q = rng.sample(PLACES, 2)
    parts = [rng.choice(theme["openers"]).format(p=p.title(), q=q.title())]
    parts += rng.sample(theme["words"], rng.randint(6, 10))
    parts += rng.sample(GENERAL, rng.randint(2, 5))
    parts += rng.sample(FILLER, rng.randint(1, 3))
    if rng.random() < 0.3:
        other = THEMES[rng.choice(list(THEMES))]
        parts += rng.sample(other["words"], 2)
    text = " ".join(parts)
    if rng.random() < 0.15:
        text = "<b>" + text + "</b>"
    if rng.random() < 0.2:
        text += " https://t.co/" + "".join(rng.choices("abcdefgh0123456789", k=8))
    if rng.random() < 0.15:
        text += " %d min" % rng.randint(2, 45)

    record = {
        "id": "tw-%04d" % index,
        "source": "twitter",
        "ts": (start + datetime.timedelta(minutes=rng.randint(0, 14 * 24 * 60)))
        .strftime("%Y-%m-%dT%H:%M:%SZ"),
        "text": text,
        "meta": {"lang": "en", "author": "user%03d" % rng.randint(1, 150)},
    }
    tag = rng.choice(theme["tags"])
    if rng.random() < 0.5:
        record["tags"] = [tag]
    else:
        record["text"] += " #" + tag
    if rng.random() < 0.6:
        record["lat"] = round(51.0447 + rng.uniform(-0.12, 0.12), 5)
        record["lon"] = round(-114.0719 + rng.uniform(-0.18, 0.18), 5)
    return record


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True)
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--seed", type=int, default=20240301)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    start = datetime.datetime(2024, 3, 1)
    with open(args.out, "w", encoding="utf-8") as out:
        for i in range(1, args.count + 1):
            out.write(json.dumps(make_doc(rng, i, start), sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
