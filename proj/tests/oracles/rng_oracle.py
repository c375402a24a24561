"""Reference values for the RNG stream tests.

Independent Python implementations of SplitMix64 and the MT19937-64 engine
(Matsumoto & Nishimura reference algorithm); prints the constants frozen in
tests/unit/paramvec_test.cc.
"""
import math

M64 = (1 << 64) - 1


def mix(x):
    x = (x + 0x9E3779B97F4A7C15) & M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & M64
    return x ^ (x >> 31)


class MT64:
    def __init__(self, seed):
        self.mt = [0] * 312
        self.mt[0] = seed & M64
        for i in range(1, 312):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & M64
        self.idx = 312

    def next(self):
        if self.idx >= 312:
            for i in range(312):
                x = (self.mt[i] & 0xFFFFFFFF80000000) | (self.mt[(i + 1) % 312] & 0x7FFFFFFF)
                xa = x >> 1
                if x & 1:
                    xa ^= 0xB5026F5AA96619E9
                self.mt[i] = self.mt[(i + 156) % 312] ^ xa
            self.idx = 0
        y = self.mt[self.idx]
        self.idx += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & M64


def engine_seed(g, s, r):
    h = mix(g)
    h = mix(h ^ s)
    return mix(h ^ ((r * 0xD1B54A32D192ED03) & M64))


if __name__ == "__main__":
    print("mix(1234567) =", mix(1234567))
    e = MT64(5489)
    for _ in range(9999):
        e.next()
    print("mt64 default 10000th =", e.next())
    e = MT64(engine_seed(1, 2, 3))
    raw = [e.next() for _ in range(3)]
    print("stream(1,2,3) raw =", raw)
    e = MT64(engine_seed(42, 7, 0))
    u = (e.next() >> 11) * 2.0 ** -53
    print("stream(42,7,0) uniform = %r" % u)
    e = MT64(engine_seed(42, 7, 0))
    u1 = (e.next() >> 11) * 2.0 ** -53
    u2 = (e.next() >> 11) * 2.0 ** -53
    r = math.sqrt(-2.0 * math.log(u1))
    print("stream(42,7,0) normals = %r %r" % (r * math.cos(2 * math.pi * u2),
                                             r * math.sin(2 * math.pi * u2)))
