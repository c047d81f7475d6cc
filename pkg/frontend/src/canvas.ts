// Replay a draw-command list onto a 2D canvas context.

import { DrawCommand } from "./types.js";

export function paint(
  ctx: CanvasRenderingContext2D,
  commands: DrawCommand[],
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, width, height);
  for (const cmd of commands) {
    switch (cmd.kind) {
      case "line":
        ctx.strokeStyle = cmd.color;
        ctx.lineWidth = cmd.width;
        ctx.beginPath();
        ctx.moveTo(cmd.x1, cmd.y1);
        ctx.lineTo(cmd.x2, cmd.y2);
        ctx.stroke();
        break;
      case "path":
        ctx.strokeStyle = cmd.color;
        ctx.lineWidth = cmd.width;
        ctx.beginPath();
        cmd.points.forEach(([x, y], i) => {
          if (i === 0) ctx.moveTo(x, y);
          else ctx.lineTo(x, y);
        });
        ctx.stroke();
        break;
      case "circle":
        ctx.fillStyle = cmd.fill;
        ctx.beginPath();
        ctx.arc(cmd.x, cmd.y, cmd.r, 0, 2 * Math.PI);
        ctx.fill();
        break;
      case "rect":
        ctx.strokeStyle = cmd.color;
        ctx.lineWidth = 1.5;
        ctx.strokeRect(cmd.x, cmd.y, cmd.w, cmd.h);
        break;
      case "text":
        ctx.fillStyle = cmd.color;
        ctx.font = "9px sans-serif";
        ctx.textAlign = "center";
        ctx.fillText(cmd.text, cmd.x, cmd.y);
        break;
    }
  }
}
