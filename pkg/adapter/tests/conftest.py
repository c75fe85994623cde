import math

import cv2
import numpy as np

SKIN_BGR = (140, 160, 205)
LIP_BGR = (60, 50, 170)
GAP_BGR = (30, 25, 60)


def mouth_frame(opening, w=300, h=200, center=None):
    """One synthetic lip-crop frame: skin background, lips, inner gap."""
    frame = np.full((h, w, 3), SKIN_BGR, np.uint8)
    cx, cy = center or (w // 2, h // 2)
    cv2.ellipse(frame, (cx, cy), (90, 28 + opening), 0, 0, 360, LIP_BGR, -1)
    cv2.ellipse(frame, (cx, cy), (60, max(2, opening)), 0, 0, 360, GAP_BGR, -1)
    return frame


def write_video(path, frames, fps=25.0):
    h, w = frames[0].shape[:2]
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"MJPG"), fps, (w, h))
    assert writer.isOpened()
    for f in frames:
        writer.write(f)
    writer.release()


def make_talking_video(path, n_frames=30, fps=25.0):
    """Mouth opening oscillates like speech."""
    frames = [
        mouth_frame(int(10 + 8 * math.sin(2 * math.pi * 3 * t / n_frames)))
        for t in range(n_frames)
    ]
    write_video(path, frames, fps)
    return n_frames


def make_static_video(path, n_frames=20, fps=25.0):
    frames = [mouth_frame(12) for _ in range(n_frames)]
    write_video(path, frames, fps)
    return n_frames


def make_blank_first_video(path, n_frames=8, fps=25.0):
    frames = [np.full((200, 300, 3), SKIN_BGR, np.uint8)]
    frames += [mouth_frame(10) for _ in range(n_frames - 1)]
    write_video(path, frames, fps)
    return n_frames


def make_hole_video(path, n_frames=10, blank_at=4, fps=25.0):
    frames = []
    for t in range(n_frames):
        if t == blank_at:
            frames.append(np.full((200, 300, 3), SKIN_BGR, np.uint8))
        else:
            frames.append(mouth_frame(10 + (t % 3)))
    write_video(path, frames, fps)
    return n_frames


def make_two_mouths_video(path, n_frames=6, fps=25.0):
    frames = []
    for _ in range(n_frames):
        f = np.full((200, 360, 3), SKIN_BGR, np.uint8)
        for cx in (90, 270):
            cv2.ellipse(f, (cx, 100), (60, 26), 0, 0, 360, LIP_BGR, -1)
            cv2.ellipse(f, (cx, 100), (40, 8), 0, 0, 360, GAP_BGR, -1)
        frames.append(f)
    write_video(path, frames, fps)
    return n_frames


def decoded_frame_count(path):
    cap = cv2.VideoCapture(str(path))
    n = 0
    while True:
        ok, _ = cap.read()
        if not ok:
            break
        n += 1
    cap.release()
    return n
