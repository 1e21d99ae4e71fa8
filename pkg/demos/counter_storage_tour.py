"""
Stacks and queues on counters
=============================

A counter machine has no tape, so any data structure must live inside
plain nonnegative integers.  This walk shows the integer encoding of a
digit stack, the four-counter FIFO queue built from two such stacks, and
the step-cost bounds every operation respects.
"""

from omegacount.storage import (add_rear_bound, front_bound, queue_add_rear,
                                queue_empty, queue_front, queue_remove_front,
                                stack_decode, stack_encode, stack_pop,
                                stack_push)

# ---------------------------------------------------------------------
# a stack is one integer: digits 2..k-1 in base k over a bottom marker 1
k = 5
s = stack_encode([2, 3], k)
print("stack [2, 3] at k=5 encodes to", s.j)          # 1*5*5 + 2*5 + 3
print("decoded back:", stack_decode(s))

s2, cost = stack_push(s, 4)
print("push 4 -> code", s2.j, "costing", cost, "unit steps")
top, rest, cost = stack_pop(s2)
print("pop ->", top, "leaving", stack_decode(rest), "costing", cost)

# ---------------------------------------------------------------------
# a queue is two stacks plus two scratch counters; adding at the rear
# drains the main stack over, pushes, and drains back
k = 3
q = queue_empty(k)
for r in (2, 2, 2):
    before = q.step_count
    q = queue_add_rear(q, r)
    m = len(q.content) - 1
    print(f"add {r} to a queue of {m}: {q.step_count - before} steps, "
          f"bound {add_rear_bound(m, k)}")

digit, q2 = queue_front(q)
print("front is", digit, "read in", q2.step_count - q.step_count,
      "steps, bound", front_bound(len(q.content), k))

digit, q3 = queue_remove_front(q2)
print("removed", digit, "leaving", q3.content)

# ---------------------------------------------------------------------
# the bounds are what make the simulation fit inside a pad budget: a
# queue of m items is served within (2k)^(m+2) per add and k^(m+1) per
# front or remove, both independent of everything but m and k
for m in range(5):
    print(f"m={m}: add bound {add_rear_bound(m, k):>7}  "
          f"front bound {front_bound(m, k):>5}")
