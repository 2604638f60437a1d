import { DemoApp, type Seat } from "./app.js";
import { DEFAULT_CONFIG, parseScoringTable } from "./config.js";

function value(id: string): string {
  return (document.getElementById(id) as HTMLInputElement).value;
}

function seat(id: string): Seat {
  return value(id) === "human" ? "human" : "bot";
}

let app: DemoApp | null = null;

document.getElementById("start-form")!.addEventListener("submit", (event) => {
  event.preventDefault();
  const config = {
    ...DEFAULT_CONFIG,
    baseUrl: value("base-url").replace(/\/$/, ""),
    piecesPerTurn: Number(value("pieces-per-turn")),
    scoringTable: parseScoringTable(value("scoring-table")),
  };
  app?.stop();
  app = new DemoApp(document.body, config);
  void app
    .start({
      rate: value("rate"),
      horizon: Number(value("horizon")),
      policy: value("policy") === "stochastic" ? "stochastic" : "strict",
      seed: Number(value("seed")),
      seats: [seat("seat-1"), seat("seat-2")],
    })
    .catch((error) => {
      document.getElementById("message")!.textContent = String(error);
    });
});
