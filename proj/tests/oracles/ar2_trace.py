"""Manual execution of the alternating/restarting algorithm on a scripted
3-arm, 30-round instance. Written independently of the C++ code, with 1-based
rounds exactly as the pseudocode states them. Prints the frozen expectations
consumed by tests/ar2_trace_data.hpp.

Usage: python3 ar2_trace.py > ../ar2_trace_data.hpp
"""
import math

R = 1.0
ALPHA = [0.9, 0.8, 0.95]
SIGMA = [0.3, 0.5, 0.2]
INITIAL = [0.2, -0.1, 0.05]
T = 30
EPOCH = 12
C1 = 1.0

# Hand-set standard-normal noise, one row per round (round-major, 3 arms).
NOISE = [
    [0.5, -1.2, 0.3], [1.1, 0.4, -0.7], [-0.2, 2.0, 0.1], [0.8, -0.5, 1.5],
    [-1.3, 0.9, 0.6], [0.0, -0.3, -1.1], [1.7, 0.2, 0.4], [-0.6, 1.3, -0.2],
    [0.3, -2.1, 0.9], [-0.9, 0.7, 1.2], [2.2, -0.4, -0.8], [0.1, 1.0, 0.0],
    [-1.5, -0.6, 1.8], [0.6, 0.3, -0.5], [1.0, -1.7, 0.7], [-0.4, 0.5, -1.4],
    [0.9, 1.6, 0.2], [-2.0, -0.1, 0.5], [0.2, 0.8, -0.3], [1.4, -0.9, 1.1],
    [-0.7, 0.0, -0.6], [0.4, 2.3, 0.8], [-1.1, -1.0, 0.3], [0.7, 0.6, -1.9],
    [1.9, -0.2, 0.0], [-0.3, 1.1, 1.3], [0.5, -0.8, -0.4], [-1.6, 0.4, 0.6],
    [0.0, -1.4, 2.1], [1.2, 0.9, -1.0],
]


def fold(y):
    """Mirror y about +-R until it lies in [-R, R]."""
    while y > R or y < -R:
        if y > R:
            y = 2 * R - y
        else:
            y = -2 * R - y
    return y


def environment():
    r = [INITIAL[:]]
    realized = []
    for t in range(T):
        cur = r[-1]
        rr = [cur[i] + SIGMA[i] * NOISE[t][i] for i in range(3)]
        realized.append(rr)
        r.append([fold(ALPHA[i] * rr[i]) for i in range(3)])
    return r[:T], realized


def width(i, exponent_gap):
    a, s = ALPHA[i], SIGMA[i]
    return C1 * s * math.sqrt((a * a - a ** (2 * exponent_gap)) / (1 - a * a))


def run(rule, window):
    """rule: 'earliest' or 'ucb'; window: 2 (two most recent pulls) or 'all'."""
    _, realized = environment()
    log = []
    est = [0.0] * 3
    tau = [None] * 3
    trig = {}
    history = []
    for t in range(1, T + 1):  # 1-based rounds
        t0 = ((t - 1) // EPOCH) * EPOCH
        if t - 1 == t0:  # step 2(a)-(b): new epoch
            est = [0.0] * 3
            tau = [None] * 3
            trig = {}
            history = []
        local = t - t0
        trig_before = dict(trig)
        if local <= 3:
            arm = local - 1
            sup = None
        else:
            if window == 2:
                a1, a2 = history[-1], history[-2]
                sup = a1 if est[a1] >= est[a2] else a2
            else:
                best = 0
                for i in range(1, 3):
                    if est[i] > est[best] or (est[i] == est[best] and tau[i] > tau[best]):
                        best = i
                sup = best
            trig.pop(sup, None)
            for i in range(3):
                if i == sup or i in trig:
                    continue
                if est[sup] - est[i] <= width(i, t - tau[i] + 1):
                    trig[i] = t
            if local % 2 == 1 and trig:
                if rule == 'earliest':
                    arm = min(trig, key=lambda j: (trig[j], j))
                else:
                    arm = max(sorted(trig), key=lambda j: est[j] + width(j, t - tau[j]))
            else:
                arm = sup
        reward = realized[t - 1][arm]
        tau[arm] = t
        trig.pop(arm, None)
        history.append(arm)
        for i in range(3):
            est[i] = fold(ALPHA[i] * reward) if i == arm else ALPHA[i] * est[i]
        trig_times = [trig.get(i, -1) for i in range(3)]
        log.append((arm, -1 if sup is None else sup, trig_times, est[:]))
    return log


def emit(name, log):
    print(f"inline const std::vector<TraceRow> {name} = {{")
    for arm, sup, trig, est in log:
        tt = ", ".join(str(x - 1 if x > 0 else -1) for x in trig)
        es = ", ".join(repr(x) for x in est)
        print(f"    {{{arm}, {sup}, {{{tt}}}, {{{es}}}}},")
    print("};")


if __name__ == "__main__":
    print("#pragma once")
    print("// Generated by tests/oracles/ar2_trace.py. Do not edit.")
    print("#include <array>")
    print("#include <vector>")
    print()
    print("namespace trace {")
    print()
    print("struct TraceRow {")
    print("  int arm;                   // pull, 0-based")
    print("  int superior;              // -1 during round-robin initialization")
    print("  std::array<int, 3> trig;   // 0-based trigger round after the pull, -1 if untriggered")
    print("  std::array<double, 3> est; // estimates after observing the pull")
    print("};")
    print()
    print(f"inline constexpr double kAlpha[3] = {{{', '.join(map(repr, ALPHA))}}};")
    print(f"inline constexpr double kSigma[3] = {{{', '.join(map(repr, SIGMA))}}};")
    print(f"inline constexpr double kInitial[3] = {{{', '.join(map(repr, INITIAL))}}};")
    print(f"inline constexpr std::size_t kRounds = {T};")
    print(f"inline constexpr std::size_t kEpoch = {EPOCH};")
    print(f"inline constexpr double kC1 = {C1!r};")
    flat = ", ".join(repr(x) for row in NOISE for x in row)
    print(f"inline constexpr double kNoise[{3 * T}] = {{{flat}}};")
    print()
    emit("kEarliestWindow2", run('earliest', 2))
    print()
    emit("kUcbAllArms", run('ucb', 'all'))
    print()
    print("}  // namespace trace")
