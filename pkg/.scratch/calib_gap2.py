import time

import numpy as np
import torch

from trackseg.config import Config
from trackseg.engine import (
    _pick_clip,
    clip_loss,
    evaluate_sequences,
    init_training,
    load_training_sequences,
    make_synthetic_set,
    polynomial_lr,
)
from trackseg.losses import sample_objective


def gen_cfg(variant="default"):
    cfg = Config()
    cfg.synth.height = cfg.synth.width = 128
    cfg.synth.num_frames = 24
    cfg.synth.min_objects = 2
    cfg.synth.max_objects = 3
    cfg.train.num_sequences = 128  # training pool
    cfg.train.steps = 2500
    cfg.train.seed = 1
    cfg.train.log_every = 0
    cfg.train.checkpoint_every = 0
    if variant == "no_recon":
        cfg.train.use_recon = False
    if variant == "no_dual_ca":
        cfg.model.bidr_dual_cross_attention = False
    return cfg


held_out = make_synthetic_set(gen_cfg().synth, 16, 777)

for variant in ("default", "no_dual_ca", "no_recon"):
    cfg = gen_cfg(variant)
    seqs = load_training_sequences(cfg)
    state = init_training(cfg)
    rng = np.random.default_rng(cfg.train.seed)
    model = state.model
    model.train()
    t0 = time.time()
    for step in range(cfg.train.steps):
        objective = sample_objective(rng, cfg.train.p_box)
        sample, s0, fmt = _pick_clip(rng, seqs, cfg, objective)
        lr = polynomial_lr(step, cfg.train)
        for g in state.optimizer.param_groups:
            g["lr"] = lr
        anneal = min(step / max(0.5 * cfg.train.steps, 1), 1.0)
        ce_top_k = 1.0 - (1.0 - cfg.train.ce_top_k_final) * anneal
        loss, det = clip_loss(model, sample, s0, cfg.train.clip_len, fmt, cfg, ce_top_k)
        state.optimizer.zero_grad()
        loss.backward()
        state.optimizer.step()
        if (step + 1) % 250 == 0:
            print(
                f"{variant} step {step+1} loss {float(loss.detach()):.3f} "
                f"jac {det['jaccard']:.3f} box {det['box']:.3f} [{time.time()-t0:.0f}s]",
                flush=True,
            )
        if (step + 1) % 1250 == 0:
            mm = evaluate_sequences(model, held_out[:6], "mask")
            bm = evaluate_sequences(model, held_out[:6], "box")
            print(
                f"  {variant} @{step+1}: mask-init J {mm['mask_iou']:.3f} | "
                f"box-init J {bm['mask_iou']:.3f} cons {bm['consistency']:.3f}",
                flush=True,
            )
            model.train()
    mm = evaluate_sequences(model, held_out, "mask")
    bm = evaluate_sequences(model, held_out, "box")
    print(
        f"FINAL {variant}: mask-init J {mm['mask_iou']:.4f} "
        f"box-init J {bm['mask_iou']:.4f} gap {mm['mask_iou']-bm['mask_iou']:.4f} "
        f"boxIoU {bm['box_iou']:.3f}",
        flush=True,
    )
    torch.save(model.state_dict(), f"/root/pkg/.scratch/calib_gap2_{variant}.pt")
