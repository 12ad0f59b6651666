import json, subprocess, numpy as np
from cvxopt import matrix, solvers
solvers.options['show_progress'] = False
solvers.options['abstol'] = 1e-9; solvers.options['reltol'] = 1e-9; solvers.options['feastol'] = 1e-9
cases = json.load(open('/tmp/randcases.json'))
ours = {}
out = subprocess.run(['/tmp/solvecases', '/tmp/randcases.json'], capture_output=True, text=True).stdout
for line in out.strip().split('\n'):
    parts = line.split()
    ours[int(parts[0])] = (parts[1], float(parts[2]))

def svecd(m): return m*(m+1)//2
worst = 0.0
for i, cs in enumerate(cases):
    n, p, l, qs, ss = cs['n'], cs['p'], cs['l'], cs['q'], cs['s']
    mdim = l + sum(qs) + sum(svecd(m) for m in ss)
    c = np.array(cs['c']); A = np.array(cs['A']).reshape(p, n)
    b = np.array(cs['b']); h = np.array(cs['h']); G = np.array(cs['G']).reshape(mdim, n)
    # convert svec rows to cvxopt full-matrix storage rows
    Gl, hl = G[:l], h[:l]; o = l
    Gq, hq = [], []
    for q in qs:
        Gq.append(G[o:o+q]); hq.append(h[o:o+q]); o += q
    Gs, hs = [], []
    for m in ss:
        # svec block -> full m*m rows (cvxopt 's' uses column-major full storage)
        Sv = G[o:o+svecd(m)]; sv_h = h[o:o+svecd(m)]; o += svecd(m)
        full_rows = np.zeros((m*m, n)); full_h = np.zeros(m*m)
        idx = 0
        for j in range(m):
            full_rows[j*m+j] = Sv[idx]; full_h[j*m+j] = sv_h[idx]; idx += 1
            for ii in range(j+1, m):
                full_rows[j*m+ii] = Sv[idx]/np.sqrt(2); full_rows[ii*m+j] = Sv[idx]/np.sqrt(2)
                full_h[j*m+ii] = sv_h[idx]/np.sqrt(2); full_h[ii*m+j] = sv_h[idx]/np.sqrt(2)
                idx += 1
        Gs.append(full_rows); hs.append(full_h)
    Gfull = np.vstack([Gl] + Gq + Gs) if (len(Gq)+len(Gs)) else Gl
    hfull = np.concatenate([hl] + hq + hs) if (len(hq)+len(hs)) else hl
    dims = {'l': l, 'q': qs, 's': ss}
    sol = solvers.conelp(matrix(c), matrix(Gfull), matrix(hfull), dims,
                         matrix(A) if p else matrix(np.zeros((0,n))), matrix(b) if p else matrix(np.zeros(0)))
    ref = sol['primal objective']
    st, obj = ours[i]
    rel = abs(obj-ref)/max(1, abs(ref))
    worst = max(worst, rel)
    flag = 'OK ' if rel < 1e-6 and st == 'optimal' else 'BAD'
    print(f"{flag} case {i}: ours={obj:.10e} cvxopt={ref:.10e} rel={rel:.2e} status={sol['status']}/{st}")
print("worst rel diff:", worst)
