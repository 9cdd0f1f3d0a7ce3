"""Run single-seed cascades and inspect iteration-by-iteration traces.

The cascade model attempts each (activator, target, layer) contact exactly
once with probability pi. Under the OR protocol one successful contact on
any layer activates the target; under AND, every layer where the target is
present must deliver a successful contact in the same iteration.
"""

from spreadnet import netgen
from spreadnet.micm import MicmConfig, Protocol, simulate, simulate_avg

net = netgen.generate(netgen.GenSpec("pa", 3, 60, seed=7, pa_attach_m=4))

sp, trace, attempts = simulate(net, MicmConfig(0.3, Protocol.OR, 0, 42),
                               record_trace=True)
print("spreading potential:", sp)
for iteration, ids in trace:
    print(f"  iter {iteration}: {len(ids)} newly active -> {ids[:8]}"
          + (" ..." if len(ids) > 8 else ""))
print(f"({len(attempts)} contact attempts recorded)")

# averaged potentials over repetitions are the building block of the dataset
avg = simulate_avg(net, pi=0.3, protocol=Protocol.OR, seed_actor=0,
                   repetitions=50, master_seed=1)
print("averaged over 50 reps:", avg)

# the AND protocol is much harder to satisfy at the same pi
avg_and = simulate_avg(net, pi=0.3, protocol=Protocol.AND, seed_actor=0,
                       repetitions=50, master_seed=1)
print("same seed under AND: ", avg_and)
