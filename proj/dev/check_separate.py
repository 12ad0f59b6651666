import numpy as np, cvxpy as cp

N, Q, sig = 8, 0.1, 1e-9
amp = np.sqrt(1e-7)
angles = [-10, 10, -30, 30, 80, -80, -50, 50]
eves = [-30, 30]
def steer(deg):
    th = np.deg2rad(deg)
    return np.exp(1j*2*np.pi*0.5*np.arange(N)*np.sin(th))
g = amp*steer(60.0)
hs = [amp*steer(a) for a in eves]
M = 201
grid = np.linspace(-90, 90, M)
des = np.array([1.0 if any(abs(t-a) < 2.5 for a in angles) else 0.0 for t in grid])
A = np.array([steer(t) for t in grid])

def match_error_min(cov_extra, subspace=None):
    # min over S (PSD, in subspace), eta of sum |eta*des - a^H (S+cov_extra) a|^2, tr(S)=Q-tr(cov_extra)
    dim = N if subspace is None else subspace.shape[1]
    S = cp.Variable((dim, dim), hermitian=True)
    eta = cp.Variable()
    B = subspace if subspace is not None else np.eye(N)
    gains = []
    for m in range(M):
        q = B.conj().T @ A[m]
        gains.append(cp.real(cp.quad_form(q, S)) + np.real(A[m].conj() @ cov_extra @ A[m]))
    resid = cp.hstack([eta*des[m] - gains[m] for m in range(M)])
    pow_fixed = np.trace(cov_extra).real
    prob = cp.Problem(cp.Minimize(cp.sum_squares(resid)),
                      [S >> 0, cp.real(cp.trace(S)) == Q - pow_fixed])
    prob.solve(solver=cp.CVXOPT)
    return prob.value

bench = match_error_min(np.zeros((N,N), complex))
print("sensing-only benchmark:", bench)

# separate at r0=0.5: min-power AN-free beam
r0 = 0.5
W = cp.Variable((N,N), hermitian=True)
cons = [W >> 0, cp.real(cp.trace(W)) <= Q]
for h in hs:
    cons.append(cp.real(cp.quad_form(g, W))/sig - 2**r0*cp.real(cp.quad_form(h, W))/sig >= 2**r0 - 1)
p6 = cp.Problem(cp.Minimize(cp.real(cp.trace(W))), cons)
p6.solve(solver=cp.CVXOPT)
Wv = W.value
lam, V = np.linalg.eigh(Wv)
print("p6 power:", p6.value, "eig ratio:", lam[-2]/lam[-1])
w0 = np.sqrt(lam[-1])*V[:,-1]
# orthobasis of g-perp
Qm, _ = np.linalg.qr(np.column_stack([g, np.eye(N)[:,:N-1]]))
U = Qm[:,1:]
sep = match_error_min(np.outer(w0, w0.conj()), subspace=U)
print("separate error at r0=0.5:", sep, " ratio:", sep/bench)
