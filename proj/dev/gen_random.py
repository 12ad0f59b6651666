import json, numpy as np
rng = np.random.default_rng(7)
cases = []
for t in range(24):
    n = int(rng.integers(4, 12)); p = int(rng.integers(0, 3))
    l = int(rng.integers(0, 5)); nq = int(rng.integers(0, 3)); ns = int(rng.integers(0, 3))
    qs = [int(rng.integers(2, 6)) for _ in range(nq)]
    ss = [int(rng.integers(1, 5)) for _ in range(ns)]
    if l + nq + ns == 0: l = 3
    def svecd(m): return m*(m+1)//2
    mdim = l + sum(qs) + sum(svecd(m) for m in ss)
    if mdim < n + 2:  # keep [G; A] full column rank for the reference solver
        l += n + 2 - mdim
        mdim = n + 2
    A = rng.standard_normal((p, n)); G = rng.standard_normal((mdim, n))
    # interior s0, z0
    def interior():
        v = np.zeros(mdim); o = 0
        v[:l] = rng.random(l) + 0.5; o = l
        for q in pass_qs:
            u = rng.standard_normal(q-1); v[o] = np.linalg.norm(u) + rng.random() + 0.3
            v[o+1:o+q] = u; o += q
        for m in pass_ss:
            X = rng.standard_normal((m, m)); X = X@X.T + (0.2+rng.random())*np.eye(m)
            iu = []
            for j in range(m):
                iu.append(X[j,j])
                for i in range(j+1, m): iu.append(np.sqrt(2)*X[i,j])
            v[o:o+svecd(m)] = iu; o += svecd(m)
        return v
    pass_qs, pass_ss = qs, ss
    x0 = rng.standard_normal(n); s0 = interior(); z0 = interior()
    y0 = rng.standard_normal(p)
    h = G@x0 + s0; b = A@x0
    c = -(G.T@z0 + (A.T@y0 if p else 0))
    # scale some rows to stress equilibration
    cases.append(dict(n=n,p=p,l=l,q=qs,s=ss,
        c=c.tolist(), A=A.flatten().tolist(), b=b.tolist(),
        G=G.flatten().tolist(), h=h.tolist()))
json.dump(cases, open('/tmp/randcases.json','w'))
print("wrote", len(cases))
