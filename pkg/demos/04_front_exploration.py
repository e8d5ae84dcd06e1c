"""
Exploring the whole front
=========================

Run the region-splitting search on a random toy class and compare it with
brute-force enumeration.
"""
from paretointerp.bruteforce import count_class, exact_front
from paretointerp.explorer import explore_poi, format_report, front_report
from paretointerp.toy import random_toy_instance

toy = random_toy_instance(seed=13)
print("class size", count_class(toy.spec), "samples", len(toy.samples))

front = explore_poi(toy.spec, toy.samples)
for entry in front.sorted_entries():
    print(entry.measures, "found at pop", entry.pop)
print(format_report(front_report(front)))

exact = exact_front(toy.spec, toy.samples)
print("matches enumeration:", front.pairs() == set(exact))

for rec in front.trace[:5]:
    print(rec["pop"], rec["region"], rec["outcome"])
