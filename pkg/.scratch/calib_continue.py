import time, numpy as np, torch
from trackseg.config import Config
from trackseg.engine import init_training, clip_loss, evaluate_sequences, load_training_sequences, _pick_clip
from trackseg.losses import sample_objective

cfg = Config()
cfg.synth.min_objects = 2; cfg.synth.max_objects = 3; cfg.synth.num_frames = 24
cfg.train.num_sequences = 8
seqs = load_training_sequences(cfg)
state = init_training(cfg)
state.model.load_state_dict(torch.load(".scratch/calib_overfit2.pt", weights_only=True))
model = state.model
rng = np.random.default_rng(123)
for g in state.optimizer.param_groups: g["lr"] = 1e-4

model.train()
t0 = time.time()
for step in range(1000):
    objective = sample_objective(rng, 0.3)
    sample, s0, fmt = _pick_clip(rng, seqs, cfg, objective)
    loss, det = clip_loss(model, sample, s0, cfg.train.clip_len, fmt, cfg, 0.15)
    state.optimizer.zero_grad(); loss.backward(); state.optimizer.step()
    if (step+1) % 250 == 0:
        m = evaluate_sequences(model, seqs, "mask")
        print(f"+{step+1}: maskIoU {m['mask_iou']:.3f} boxIoU {m['box_iou']:.3f} cons {m['consistency']:.3f} [{time.time()-t0:.0f}s]", flush=True)
        model.train()
torch.save(model.state_dict(), ".scratch/calib_continue.pt")
